use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid data: {0}")]
    Invalid(String),

    #[error("infeasible {variant}: {reason}")]
    Infeasible {
        variant: &'static str,
        reason: String,
    },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("operation requires a {expected} problem, got {got}")]
    Variant {
        expected: &'static str,
        got: &'static str,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
