use thiserror::Error;

/// Errors raised by the numeric and arithmetic layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of {what} at s = {at}")]
    Pole { what: &'static str, at: String },

    #[error("argument outside the validated range of {what}: {detail}")]
    Range { what: &'static str, detail: String },

    #[error("memory cap exceeded: {required} entries required, cap is {cap}")]
    MemoryCap { required: u64, cap: u64 },

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("{0} is not supported")]
    Unsupported(String),

    #[error("contour region safety: {0}")]
    RegionSafety(String),

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("division by zero: {0}")]
    ZeroDivision(String),

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),
}

impl Error {
    /// Whether the failure is numerical (as opposed to a bad request).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::MemoryCap { .. }
                | Error::NonConvergence(_)
                | Error::ZeroDivision(_)
                | Error::NonFinite(_)
                | Error::Overflow(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
