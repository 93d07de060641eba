use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("value is not an integer: {0}")]
    NotIntegral(String),
    #[error("invalid prime {ell}: {reason}")]
    BadPrime { ell: u64, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
