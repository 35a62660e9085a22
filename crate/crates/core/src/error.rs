//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the library.
///
/// The variants are grouped by who must act on them: `InvalidArgument` means
/// the call itself was malformed, `Contract` means the data violates a
/// documented precondition, `Numerical` means arithmetic broke down, and
/// `Parse`/`Io` cover ingestion. The CLI maps the groups onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// The caller passed an argument outside the documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The data violates a precondition (single-class labels, mismatched
    /// shapes, incompatible baseline rates, ...).
    #[error("data contract violation: {0}")]
    Contract(String),

    /// Arithmetic failure: singular system, non-finite value, exhausted
    /// retries.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Malformed input file.
    #[error("parse error in {path} (record {record}): {message}")]
    Parse {
        path: String,
        record: u64,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
