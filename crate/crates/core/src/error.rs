use thiserror::Error;

/// Errors surfaced by archive operations, domains, engines and the
/// adaptation loop.
#[derive(Debug, Error)]
pub enum QdError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, QdError>;
