use alloc::string::String;

/// Failure modes shared by every engine in the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Malformed input: sort mismatch, bad probabilities, unknown symbol, ...
    #[error("contract violation: {0}")]
    Contract(String),
    /// An enumeration would exceed a configured guard.
    #[error("resource limit: {what} requires {needed}, limit is {limit}")]
    ResourceLimit { what: String, needed: String, limit: String },
    /// A mathematical side condition required by an algorithm does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// Invalid configuration parameter.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Contract(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
