use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("misaligned measure: {0}")]
    Alignment(String),
    #[error("cube family is not pairwise disjoint: {0}")]
    Family(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("numerical failure: {message} (iterations: {iterations}, bracket: [{lo}, {hi}])")]
    Numerical {
        message: String,
        iterations: usize,
        lo: f64,
        hi: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
