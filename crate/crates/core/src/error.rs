//! Error type shared across the crate.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// CSV header does not match the expected schema.
    #[error("schema error: {0}")]
    Schema(String),

    /// A cell could not be parsed as a number.
    #[error("parse error at row {row}: {detail}")]
    Parse { row: usize, detail: String },

    /// A sample violates a domain invariant on load.
    #[error("validation error at row {row}: {detail}")]
    Validation { row: usize, detail: String },

    /// Bad argument to an operation.
    #[error("argument error: {0}")]
    Argument(String),

    /// Input outside the mathematical domain of a formula or metric.
    #[error("domain error: {0}")]
    Domain(String),

    /// Tensor or matrix shape mismatch.
    #[error("shape error: expected {expected}, got {actual}")]
    Shape { expected: String, actual: String },

    /// Iterative solver failed to converge within its budget.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// Training aborted (non-finite loss).
    #[error("training error at epoch {epoch}: {detail}")]
    Training { epoch: usize, detail: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
