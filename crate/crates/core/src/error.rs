use thiserror::Error;

use crate::jets::JetError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Jet(#[from] JetError),

    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("invalid value at `{path}`: {message}")]
    Value { path: String, message: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    #[error("point outside the domain: {0}")]
    OutsideDomain(String),

    #[error("invalid derivative order: {0}")]
    InvalidOrder(String),

    #[error("folding requires a positive integer exponent, got {0}")]
    NonIntegerFold(f64),

    #[error("pole hit: denominator modulus {0:e}")]
    PoleHit(f64),

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("contour passes through a zero after {attempts} radius perturbations")]
    ContourThroughZero { attempts: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}
