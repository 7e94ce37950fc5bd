use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not representable: {0}")]
    NotRepresentable(String),
    #[error("sampling error: {0}")]
    Sampling(String),
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
