use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("exceptional parameter: {0}")]
    Exceptional(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("division by zero")]
    DivisionByZero,
}

pub type Result<T> = std::result::Result<T, Error>;
