use thiserror::Error;

/// Errors raised by the exact model, the operators and the certificates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sequence indices are 1-based; index 0 is not allowed")]
    ZeroIndex,
    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),
    #[error("quadratic weight must be positive, got {0}")]
    NonPositiveWeight(String),
    #[error("truncation dimension must be at least 1")]
    ZeroDimension,
    #[error("hypothesis `{name}` failed: {detail}")]
    Hypothesis { name: String, detail: String },
    #[error("malformed document: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
