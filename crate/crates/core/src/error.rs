//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Shape or degree mismatch in a linear-algebra or evaluation call.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A name (basis element, generator, relation, homology class) does not resolve.
    #[error("unknown name: {0}")]
    UnknownName(String),

    /// An operation was called with the wrong number of arguments.
    #[error("arity mismatch for `{name}`: expected {expected}, got {got}")]
    Arity {
        name: String,
        expected: usize,
        got: usize,
    },

    /// Structural validation failed (d^2 != 0, invalid permutation, Jacobi failure, ...).
    #[error("invalid structure: {0}")]
    Invalid(String),

    /// A Massey product is undefined because a vanishing condition fails.
    #[error("Massey product undefined: {0}")]
    Undefined(String),

    /// Document parsing or schema violation.
    #[error("schema error: {0}")]
    Schema(String),

    /// An internal invariant that should be unreachable was violated.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
