use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Bad user-supplied parameter; names the offending field.
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },

    #[error("quadrature did not converge on [{lo}, {hi}] (estimated error {err:e})")]
    Quadrature { lo: f64, hi: f64, err: f64 },

    #[error("root finding failed: {0}")]
    Root(String),

    #[error("step size collapsed to {h:e} at t = {t}")]
    StepCollapse { t: f64, h: f64 },

    /// A numerically impossible state, e.g. a negative intensity radicand.
    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error(
        "variance-deficit criterion not met: deficit {deficit:e} with {basis_size} basis points"
    )]
    Truncation { deficit: f64, basis_size: usize },

    #[error("{excluded} of {total} samples excluded for unresolved tangencies")]
    TooManyExclusions { excluded: usize, total: usize },

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
