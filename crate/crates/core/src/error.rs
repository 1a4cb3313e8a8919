use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input outside the mathematical domain of the operation
    /// (zero where nonzero is required, non-coprime arguments, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An intermediate value left the supported 64-bit range.
    #[error("range error: {0}")]
    Range(String),

    /// An enumeration would exceed the configured safety cap.
    #[error("enumeration of {candidates} candidates exceeds cap {cap}")]
    TooManyCandidates { candidates: u128, cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn range(msg: impl Into<String>) -> Error {
    Error::Range(msg.into())
}
