use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("degree violation: {0}")]
    Degree(String),
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("unknown basis element `{0}`")]
    UnknownBasis(String),
    #[error("invalid data: {0}")]
    Invalid(String),
    #[error("differential does not square to zero")]
    NotDifferential,
    #[error("axiom `{axiom}` fails: {detail}")]
    Axiom { axiom: String, detail: String },
    #[error("bound exceeded: {0}")]
    Bound(String),
    #[error("missing corolla {0}")]
    MissingCorolla(String),
    #[error("pairing is degenerate in degree {0}")]
    Degenerate(i32),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("linear system has no solution: {0}")]
    Unsolvable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
