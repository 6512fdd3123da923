use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("invalid presentation: {0}")]
    Validation(String),

    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("field error: {0}")]
    Field(String),

    #[error("arrow enumeration did not stabilize at the given length bound: shortest unresolved through-path is {0}")]
    NotStabilized(String),

    #[error("the split surface has a closed component; pairing its punctures is not supported")]
    ExcludedSphere,

    #[error("internal error: {0}")]
    Internal(String),
}
