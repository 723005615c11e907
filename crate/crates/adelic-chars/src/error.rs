//! Crate-wide error type for data-dependent failures.
//!
//! Mismatches between values built from different parents (two algebras, two
//! systems, wrong ambient dimension) are programming errors and panic with a
//! descriptive message; everything a caller can trigger with well-formed but
//! unlucky data comes through [`Error`].

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("vector does not lie in p_lambda")]
    NotInP,

    #[error("character support contains an element outside L_lambda")]
    SupportNotInL,

    #[error("gram matrix is not hermitian")]
    NotHermitian,

    #[error("unknown catalog name: {0}")]
    UnknownCatalog(String),

    #[error("central table: {0}")]
    BadCentralTable(String),

    #[error("tilde character support is not a subgroup homomorphism: {0}")]
    BadTildeSupport(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("system validation failed:\n{}", .0.join("\n"))]
    Validation(Vec<String>),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
