use thiserror::Error;

/// Errors raised by the library.
///
/// Algorithmic verdicts (the wild algorithm declining, a collision that does
/// not recover) are typed outcomes on their own result types and never show
/// up here.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The caller broke an API contract: mismatched fields, a degree that
    /// does not divide, a non-monic input where a monic one is required.
    #[error("usage error: {0}")]
    Usage(String),
    /// A mathematically undefined request, such as inverting zero or
    /// dividing by a degree that vanishes in the field.
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed text input.
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    /// The requested work does not fit the configured budget.
    #[error("budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn parse_err(offset: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: msg.into(),
    }
}
