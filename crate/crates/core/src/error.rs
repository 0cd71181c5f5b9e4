use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size error: {0}")]
    Size(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
