use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent parameters (vector lengths, matrix sizes, ranges).
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Input outside the domain of the operation (empty point set, resolution too fine).
    #[error("domain error: {0}")]
    Domain(String),
    /// A valid request the operation does not support.
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
