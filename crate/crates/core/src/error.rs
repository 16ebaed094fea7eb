use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain the operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    /// Time grid is not strictly increasing or otherwise unusable.
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    /// Eigensolver failure, non-finite values, and similar.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Failure inside one cell of a parameter sweep.
    #[error("sweep value {value}: {source}")]
    Sweep { value: f64, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;
