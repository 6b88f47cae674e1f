use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid value for `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("mode index {index} out of range for {n_modes} mode(s)")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("mode {0} targeted more than once")]
    DuplicateTarget(usize),

    #[error("non-positive marginal variance {0:e}; the state is corrupted")]
    SingularMarginal(f64),

    #[error("grid resolution: {0}")]
    Resolution(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config schema: {0}")]
    Schema(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
