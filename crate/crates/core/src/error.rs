//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Matrix has no inverse over GF(2).
    #[error("matrix is singular over GF(2)")]
    SingularMatrix,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// Malformed alist text; `line` is 1-based.
    #[error("alist parse error at line {line}: {msg}")]
    AlistParse { line: usize, msg: String },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("duplicate matrix entry at ({0}, {1})")]
    DuplicateEntry(usize, usize),

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("bad dimensions: {0}")]
    BadDimensions(String),

    /// The indicator vector leaves no check node available for a variable.
    #[error("no candidate check node for variable {0}")]
    NoCandidateCheck(usize),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
