//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("problem size {n} exceeds limit {limit}")]
    SizeLimitExceeded { n: usize, limit: usize },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("malformed input at line {line}: {msg}")]
    MalformedInput { line: usize, msg: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("replication {rep_index} failed: {source}")]
    Replication {
        rep_index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
