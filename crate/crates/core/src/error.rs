use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed request: wrong dimension, unknown name, bad subsystem index.
    #[error("usage error: {0}")]
    Usage(String),
    /// Input failed a structural check (Hermiticity, trace, positivity, parameter range).
    #[error("validation error: {0}")]
    Validation(String),
    /// Input is well formed but outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no closed form for {0}; use hermitian_eig / thermal_state instead")]
    NoClosedForm(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
