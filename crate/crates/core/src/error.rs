use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported discriminant {0}: only d in {{0,1,2,3,7,11}} is supported")]
    UnsupportedDiscriminant(i64),

    #[error("matrix is not in the ambient group: {0}")]
    NotInAmbient(String),

    #[error("element is not in the subgroup")]
    NotInSubgroup,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("iteration cap of {cap} exceeded while {context}")]
    CapExceeded { cap: usize, context: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("cache entry rejected: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
