use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("quadratic extensions with different defining values cannot be combined")]
    ContextMismatch,
    #[error("requested {requested} decimal places but only {available} are guaranteed")]
    PrecisionExceeded { requested: usize, available: usize },
    #[error("index {0} is not admissible (the last part must exceed 1 for convergence)")]
    NotAdmissible(String),
    #[error("weight {weight} exceeds truncation order {order}")]
    Truncation { weight: usize, order: usize },
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("constant term is not invertible")]
    NotInvertible,
    #[error("series precondition failed: {0}")]
    Precondition(String),
    #[error("wrong arena: expected {expected}, found {found}")]
    WrongArena { expected: &'static str, found: &'static str },
    #[error("inconsistent linear system at degree {0}")]
    Inconsistent(usize),
    #[error("no value available for index {0}")]
    MissingZeta(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
