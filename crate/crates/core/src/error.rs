//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the verification engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series constant term is not invertible: {0}")]
    NonInvertible(String),
    #[error("series constant term must be {expected}, found {found}")]
    BadConstantTerm { expected: String, found: String },
    #[error("gamma pole at argument {0}")]
    GammaPole(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("pole of the R-matrix at u = {0}")]
    RPole(String),
    #[error("no rewrite rule applies at position {position}: {reason}")]
    NoRule { position: usize, reason: String },
    #[error("unorderable at exact level: {0}")]
    Unorderable(String),
    #[error("negative mode in positive-half operation: {0}")]
    NegativeMode(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("PBW basis mismatch in window: {0}")]
    PbwDefect(String),
    #[error("malformed PBW index: {0}")]
    MalformedIndex(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("mode-sign violation: {0}")]
    ModeSign(String),
    #[error("convergence region violated: {0}")]
    Region(String),
    #[error("evaluation point is singular: {0}")]
    Singular(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("rewrite budget exhausted after {0} steps")]
    Budget(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
