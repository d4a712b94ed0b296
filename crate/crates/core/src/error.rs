use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid switch: {0}")]
    InvalidSwitch(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no interior root: {0}")]
    NoInteriorRoot(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid_parameter(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
