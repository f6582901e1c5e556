use thiserror::Error;

/// Errors raised by the polynomial, scheme and analysis layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("ring mismatch: Z_{left_q}[x1..x{left_n}] vs Z_{right_q}[x1..x{right_n}]")]
    RingMismatch {
        left_q: u64,
        left_n: u16,
        right_q: u64,
        right_n: u16,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error at {location}: {reason}")]
    Parse { location: String, reason: String },

    #[error("decryption failed: {0}")]
    Decryption(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn parse(location: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
