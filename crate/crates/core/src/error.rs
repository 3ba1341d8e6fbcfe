//! Error taxonomy. Validation errors are bad inputs (CLI exit code 2);
//! assertion failures are violated numeric invariants discovered at run time
//! (CLI exit code 3).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input rejected before any computation ran.
    #[error("validation: {0}")]
    Validation(String),

    /// A numeric invariant failed (identity residual, count audit, ...).
    #[error("assertion: {0}")]
    Assertion(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

pub fn assertion(msg: impl Into<String>) -> Error {
    Error::Assertion(msg.into())
}
