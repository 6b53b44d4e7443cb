use thiserror::Error;

/// Every failure the calculus can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("singular: {0}")]
    Singular(String),
    #[error("index {index} out of range (limit {limit})")]
    Index { index: usize, limit: usize },
    #[error("jet order exhausted: {0}")]
    Order(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("degenerate contact form: {0}")]
    DegenerateContact(String),
    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),
    #[error("Levi form is not positive definite: {0}")]
    Signature(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
