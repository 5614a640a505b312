use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A state or decomposition does not lie in the required range/support.
    #[error("range error: {0}")]
    Range(String),
    /// The operation was invoked on an object in the wrong state.
    #[error("state error: {0}")]
    State(String),
    /// A type invariant failed during construction or deserialization.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn range<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Range(msg.into()))
}
