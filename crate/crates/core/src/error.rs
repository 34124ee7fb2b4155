use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid root system type: {0}")]
    InvalidType(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("rejected input: {0}")]
    Rejected(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{file}:{line}: {msg}")]
    Data { file: String, line: usize, msg: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("hypotheses not met: {0}")]
    Hypothesis(String),
    #[error("search exhausted after {0} restarts")]
    Exhausted(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
