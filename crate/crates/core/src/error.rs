use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An affine image or element leaves the ambient range.
    #[error("range error: {0}")]
    Range(String),

    /// The operation is not defined for this kind of group.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A configured resource cap would be exceeded.
    #[error("resource cap exceeded: {0}")]
    Resource(String),

    /// An input failed the property the operation requires of it.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A result contradicts a proved bound or identity. Always a bug.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    /// A document could not be parsed or does not match its schema.
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
