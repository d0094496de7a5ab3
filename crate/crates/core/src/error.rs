use thiserror::Error;

/// Errors raised by the exact constructions in this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    /// A search or recursion that is expected to terminate did not. Carries
    /// whatever counterexample information is available.
    #[error("diagnostic: {0}")]
    Diagnostic(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
