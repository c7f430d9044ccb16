use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("half-space normal must be nonzero")]
    ZeroNormal,
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("body is unbounded")]
    Unbounded,
    #[error("body is empty")]
    Empty,
    #[error("need at least {needed} points, got {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("invalid norm: {0}")]
    InvalidNorm(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("hypothesis fails: {0}")]
    HypothesisFails(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
