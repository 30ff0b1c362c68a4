use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A spatial grid is too coarse for the requested evaluation.
    #[error("grid resolution error: need at least {required} points, got {actual}")]
    Resolution { required: usize, actual: usize },

    /// A construction would exceed representable sizes.
    #[error("overflow: {0}")]
    Overflow(String),

    /// An expectation value of a Hermitian operator came out complex.
    #[error(
        "hermiticity violation in <{observable}>: imaginary part {imag:e} exceeds {threshold:e}"
    )]
    Hermiticity {
        observable: &'static str,
        imag: f64,
        threshold: f64,
    },

    /// A truncated series does not meet its tail bound.
    #[error("truncation: {0}")]
    Truncation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
