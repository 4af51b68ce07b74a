use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed external input; `field` names the offending location.
    #[error("parse error in `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    /// A constructed witness failed its own postcondition. Never expected to fire.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
