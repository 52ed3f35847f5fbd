//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable {name:?} at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("input is not homogeneous")]
    Inhomogeneous,
    #[error("generator is not a monomial")]
    NotMonomial,
    #[error("zero ideal")]
    ZeroIdeal,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("missing inputs: {}", .0.join(", "))]
    NeedsInput(Vec<String>),
    #[error("table truncated: {0}")]
    Truncated(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("window insufficient: {0}")]
    Window(String),
    #[error("unstable result: {0}")]
    Unstable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
