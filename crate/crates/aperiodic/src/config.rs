//! Command-line surface. Every subcommand accepts the same [`RunConfig`];
//! options a subcommand does not use are ignored but still recorded in the
//! artifact metadata.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use aperiodic_core::potential::parse_kind;
use aperiodic_core::PotentialSpec;

use crate::error::CliError;
use crate::files::load_values;

#[derive(Debug, Parser)]
#[command(name = "aperiodic", version, about = "Transfer matrices, Green's functions and localization \
diagnostics for 1D Schrödinger operators with aperiodic potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Lyapunov exponents over an energy grid.
    Sweep(RunConfig),
    /// Shooting trace of the solution with ψ₀ = 0, ψ₁ = 1.
    Grow(RunConfig),
    /// Green's function entries of the window [1, N].
    Green(RunConfig),
    /// Good-window densities over an energy grid.
    Density(RunConfig),
    /// Interval selection and corner decay at one energy over several ℓ.
    Paving(RunConfig),
    /// The Möbius function on [1, nmax].
    Mobius(RunConfig),
    /// Pattern counts of the Möbius sequence.
    Patterns(RunConfig),
    /// Built-in oracle checks.
    Selftest(RunConfig),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sweep(_) => "sweep",
            Command::Grow(_) => "grow",
            Command::Green(_) => "green",
            Command::Density(_) => "density",
            Command::Paving(_) => "paving",
            Command::Mobius(_) => "mobius",
            Command::Patterns(_) => "patterns",
            Command::Selftest(_) => "selftest",
        }
    }

    pub fn config(&self) -> &RunConfig {
        match self {
            Command::Sweep(c)
            | Command::Grow(c)
            | Command::Green(c)
            | Command::Density(c)
            | Command::Paving(c)
            | Command::Mobius(c)
            | Command::Patterns(c)
            | Command::Selftest(c) => c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Cramer,
    Direct,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// mobius | free | periodic:a,b,... | bernoulli:p,v0,v1[,seed] | custom:@file | custom:a,b,...
    #[arg(long, default_value = "mobius")]
    pub potential: String,
    /// Coupling λ.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = -4.0, allow_negative_numbers = true)]
    pub emin: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub emax: f64,
    #[arg(long, default_value_t = 101)]
    pub epoints: usize,
    /// Single energy for grow, green and paving.
    #[arg(long, allow_negative_numbers = true)]
    pub energy: Option<f64>,
    /// Number of sites or steps.
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Good-window length.
    #[arg(long = "M", default_value_t = 50)]
    pub m: usize,
    /// Range end ℓ.
    #[arg(long, default_value_t = 10_000)]
    pub ell: usize,
    /// Comma-separated ℓ values for paving.
    #[arg(long, default_value = "1000,2000,4000")]
    pub ells: String,
    /// Norm exponent δ; defaults to b^10.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Off-diagonal decay rate.
    #[arg(long, default_value_t = 0.1)]
    pub b: f64,
    /// Covering fraction.
    #[arg(long, default_value_t = 0.5)]
    pub c0: f64,
    /// Corner decay rate separating good from bad energies.
    #[arg(long = "b-prime", default_value_t = 0.05)]
    pub b_prime: f64,
    /// Default seed for Bernoulli potentials.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Birkhoff windows averaged by sweep.
    #[arg(long, default_value_t = 1)]
    pub shifts: usize,
    /// Window-start stride for density.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[arg(long)]
    pub k1: Option<usize>,
    #[arg(long)]
    pub k2: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
    #[arg(long, default_value_t = 100)]
    pub nmax: usize,
    /// Comma-separated symbols; the period word for patterns.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub word: String,
    /// Comma-separated pattern lengths minus one.
    #[arg(long)]
    pub r: Option<String>,
    /// Worker threads, or auto.
    #[arg(long, env = "APERIODIC_THREADS", default_value = "auto")]
    pub threads: String,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_list<T: std::str::FromStr>(what: &str, s: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| usage(format!("bad {what} entry {t:?}"))))
        .collect()
}

impl RunConfig {
    pub fn spec(&self) -> Result<PotentialSpec, CliError> {
        let kind = parse_kind(&self.potential, self.seed, load_values)?;
        Ok(PotentialSpec::new(kind, self.lambda)?)
    }

    /// Equispaced grid with both endpoints.
    pub fn energy_grid(&self) -> Result<Vec<f64>, CliError> {
        if self.epoints == 0 {
            return Err(usage("epoints must be at least 1"));
        }
        if !(self.emin.is_finite() && self.emax.is_finite()) || self.emin > self.emax {
            return Err(usage("need finite emin <= emax"));
        }
        Ok(energy_grid(self.emin, self.emax, self.epoints))
    }

    pub fn energy_or(&self, default: f64) -> f64 {
        self.energy.unwrap_or(default)
    }

    pub fn n_or(&self, default: usize) -> usize {
        self.n.unwrap_or(default)
    }

    pub fn delta(&self) -> f64 {
        self.delta.unwrap_or_else(|| self.b.powi(10))
    }

    pub fn ells(&self) -> Result<Vec<usize>, CliError> {
        parse_list("ells", &self.ells)
    }

    pub fn word(&self) -> Result<Vec<i64>, CliError> {
        parse_list("word", &self.word)
    }

    pub fn r_values(&self) -> Result<Option<Vec<usize>>, CliError> {
        self.r.as_deref().map(|s| parse_list("r", s)).transpose()
    }

    /// `None` means one worker per core.
    pub fn threads(&self) -> Result<Option<usize>, CliError> {
        match self.threads.trim() {
            "auto" | "" => Ok(None),
            t => match t.parse::<usize>() {
                Ok(0) | Err(_) => Err(usage(format!("threads must be a positive integer or auto, got {t:?}"))),
                Ok(n) => Ok(Some(n)),
            },
        }
    }

    /// Every option with its effective value, for artifact headers.
    pub fn describe(&self) -> Vec<(String, String)> {
        let opt = |x: Option<String>| x.unwrap_or_else(|| "default".into());
        vec![
            ("potential".into(), self.potential.clone()),
            ("lambda".into(), format!("{:?}", self.lambda)),
            ("emin".into(), format!("{:?}", self.emin)),
            ("emax".into(), format!("{:?}", self.emax)),
            ("epoints".into(), self.epoints.to_string()),
            ("energy".into(), opt(self.energy.map(|e| format!("{e:?}")))),
            ("N".into(), opt(self.n.map(|n| n.to_string()))),
            ("M".into(), self.m.to_string()),
            ("ell".into(), self.ell.to_string()),
            ("ells".into(), self.ells.clone()),
            ("delta".into(), format!("{:?}", self.delta())),
            ("b".into(), format!("{:?}", self.b)),
            ("c0".into(), format!("{:?}", self.c0)),
            ("b_prime".into(), format!("{:?}", self.b_prime)),
            ("seed".into(), self.seed.to_string()),
            ("shifts".into(), self.shifts.to_string()),
            ("stride".into(), self.stride.to_string()),
            ("k1".into(), opt(self.k1.map(|k| k.to_string()))),
            ("k2".into(), opt(self.k2.map(|k| k.to_string()))),
            ("method".into(), format!("{:?}", self.method).to_lowercase()),
            ("nmax".into(), self.nmax.to_string()),
            ("word".into(), self.word.clone()),
            ("r".into(), opt(self.r.clone())),
            ("threads".into(), self.threads.clone()),
            ("out".into(), opt(self.out.as_ref().map(|p| p.display().to_string()))),
            ("format".into(), format!("{:?}", self.format).to_lowercase()),
        ]
    }
}

pub fn energy_grid(emin: f64, emax: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![emin];
    }
    let step = (emax - emin) / (points - 1) as f64;
    (0..points).map(|i| if i + 1 == points { emax } else { emin + step * i as f64 }).collect()
}
