use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed graph: {0}")]
    Structure(String),
    #[error("unknown decoration symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("invalid algebra: {0}")]
    Algebra(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("wrong mode: {0}")]
    Mode(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("window not closed: {0}")]
    Closure(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
