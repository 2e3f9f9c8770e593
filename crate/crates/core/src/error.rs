use thiserror::Error;

/// Errors raised by the dominance library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("distributions are not on the same frame")]
    FrameMismatch,
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("test functions carry different class tags: {0} vs {1}")]
    MixedClasses(String, String),
    #[error("unknown test function `{0}`")]
    UnknownFunction(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
