use thiserror::Error;

/// Errors raised by kernel evaluation and its supporting numerics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension m = {0} (supported: {1})")]
    UnsupportedDimension(usize, &'static str),

    #[error("bivector does not square to -1 (residual {0:.3e})")]
    NotUnitBivector(f64),

    #[error("failed to parse polynomial `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("non-integer coefficient `{0}`: only integer polynomials are supported")]
    NonIntegerCoefficient(String),

    #[error("argument out of supported range: {0}")]
    OutOfRange(String),

    #[error("singular Laplace-domain context: {0}")]
    Singular(String),

    #[error("forward Laplace tail bound {bound:.3e} exceeds tolerance {tolerance:.3e} at T = {truncation}")]
    TailBound {
        bound: f64,
        tolerance: f64,
        truncation: f64,
    },

    #[error("{method} did not converge: estimate changed by {change:.3e} under refinement (tolerance {tolerance:.3e})")]
    NonConvergence {
        method: &'static str,
        change: f64,
        tolerance: f64,
    },

    #[error("unsupported route: {0}")]
    UnsupportedRoute(String),

    #[error("polynomial {0} is not in the bounded family")]
    NotBoundedFamily(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
