use thiserror::Error;

/// Errors shared by every module of the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resource limit: {what} exceeded cap {cap}")]
    ResourceLimit { what: String, cap: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("operation not closed: {0}")]
    NotClosed(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
