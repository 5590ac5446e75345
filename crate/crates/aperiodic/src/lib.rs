//! Command-line front end for [`aperiodic_core`]: a rayon-backed executor,
//! potential files, CSV/JSON artifacts and the `aperiodic` subcommands.

pub mod artifact;
pub mod commands;
pub mod config;
mod error;
pub mod files;
pub mod pool;
pub mod selftest;

use std::fs;
use std::io::Write;
use std::path::Path;

pub use artifact::{Artifact, Cell, Table};
pub use config::{Cli, Command, Format, RunConfig};
pub use error::CliError;
pub use pool::Pool;

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn render(a: &Artifact, format: Format, timestamp: u64) -> String {
    match format {
        Format::Csv => a.to_csv(timestamp),
        Format::Json => a.to_json(timestamp),
    }
}

/// Writes `a` as configured. `paving` with an output file also writes the
/// other format next to it (`.json` or `.csv`).
pub fn emit(cmd: &Command, a: &Artifact) -> Result<(), CliError> {
    let cfg = cmd.config();
    let ts = artifact::unix_timestamp();
    let text = render(a, cfg.format, ts);
    match &cfg.out {
        Some(path) => {
            write_file(path, &text)?;
            if matches!(cmd, Command::Paving(_)) {
                let (other, ext) = match cfg.format {
                    Format::Csv => (Format::Json, "json"),
                    Format::Json => (Format::Csv, "csv"),
                };
                write_file(&path.with_extension(ext), &render(a, other, ts))?;
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
        }
    }
    for n in &a.notes {
        eprintln!("warning: {n}");
    }
    Ok(())
}

/// Runs one parsed command end to end.
pub fn execute(cmd: &Command) -> Result<(), CliError> {
    let pool = Pool::new(cmd.config().threads()?)?;
    let a = commands::run(cmd, &pool)?;
    emit(cmd, &a)?;
    match a.failure {
        Some(f) => Err(CliError::Check(f)),
        None => Ok(()),
    }
}
