use thiserror::Error;

/// Errors raised anywhere in the pipeline.
///
/// Variants are split by who is at fault: `InvalidInput` for requests outside
/// the supported range, `Certification` for a computed certificate that did
/// not hold (a construction bug or a falsified assumption), and
/// `Budget` for searches that ran out of their configured allowance.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("out of desk scale: {0}")]
    OutOfScale(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn cert(msg: impl Into<String>) -> Error {
    Error::Certification(msg.into())
}
