use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnivneError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("malformed mapping: {0}")]
    MalformedMapping(String),
    #[error("cost overflow")]
    Overflow,
    #[error("{solver} requires {expected}")]
    TopologyMismatch {
        solver: &'static str,
        expected: &'static str,
    },
    #[error("size guard: {0}")]
    SizeGuard(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid source instance: {0}")]
    InvalidSource(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, UnivneError>;
