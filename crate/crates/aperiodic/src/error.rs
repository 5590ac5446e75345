use std::fmt;
use std::path::PathBuf;

/// Failures surfaced by the command-line tool, with their exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(aperiodic_core::Error),
    Io { path: PathBuf, source: std::io::Error },
    /// A selftest suite failed.
    Check(String),
}

impl CliError {
    /// 1 for input and usage errors, 2 for numerical degeneracy.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 2,
            CliError::Check(_) => 2,
            _ => 1,
        }
    }
}

impl From<aperiodic_core::Error> for CliError {
    fn from(e: aperiodic_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => e.fmt(f),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Check(m) => write!(f, "selftest failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}
