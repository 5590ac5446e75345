use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A requested size is zero or above a configured cap.
    Size { what: &'static str, requested: u64, cap: u64 },
    /// An index or window lies outside the available data.
    Range { what: &'static str, index: i64, bound: i64 },
    /// Malformed or non-finite input.
    Input(alloc::string::String),
    /// The energy is within the singularity tolerance of the spectrum.
    NearSingular { energy: f64, distance: f64 },
    /// A postcondition that should be unreachable failed.
    Internal(&'static str),
}

impl Error {
    pub(crate) fn input(msg: impl Into<alloc::string::String>) -> Self {
        Error::Input(msg.into())
    }

    /// True for failures caused by numerical degeneracy rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NearSingular { .. } | Error::Internal(_))
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Size { what, requested, cap } => {
                write!(f, "size error: {what} = {requested} (allowed 1..={cap})")
            }
            Error::Range { what, index, bound } => {
                write!(f, "range error: {what} index {index} outside bound {bound}")
            }
            Error::Input(msg) => write!(f, "input error: {msg}"),
            Error::NearSingular { energy, distance } => write!(
                f,
                "energy {energy} is within {distance:e} of the spectrum (near-singular)"
            ),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
