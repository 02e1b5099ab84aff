use thiserror::Error;

/// Errors raised by the digit-law, generator and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BenfordError {
    /// A parameter set violates the invariants of its specification type.
    #[error("invalid specification: {0}")]
    Specification(String),
    /// A numeric argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, BenfordError>;

pub(crate) fn spec_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(BenfordError::Specification(msg.into()))
}

pub(crate) fn domain_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(BenfordError::Domain(msg.into()))
}
