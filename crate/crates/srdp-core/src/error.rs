//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by construction and evaluation routines.
#[derive(Debug, Error)]
pub enum SrdpError {
    /// Shapes of two objects do not line up (channel vs source, matrix vs alphabet, ...).
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// A probability vector failed validation.
    #[error("invalid distribution: {reason} (residual {residual:.3e})")]
    InvalidDistribution { reason: &'static str, residual: f64 },

    /// A scalar argument is outside its documented domain.
    #[error("argument out of range: {what} = {value} not in {domain}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// An exhaustive enumeration would exceed the configured cell cap.
    #[error("enumeration cap exceeded: {needed} cells needed, cap is {cap}")]
    CapExceeded { needed: u128, cap: usize },

    /// A witness does not satisfy the single-letter realism constraint.
    #[error("realism violated: TV(P_Y, Q_X) = {residual:.3e} exceeds {tolerance:.1e}")]
    RealismViolation { residual: f64, tolerance: f64 },

    /// A witness does not satisfy a required Markov structure.
    #[error("Markov structure violated: {chain} (max deviation {deviation:.3e})")]
    MarkovViolation { chain: &'static str, deviation: f64 },

    /// An auxiliary alphabet exceeds its cardinality cap.
    #[error("auxiliary cardinality {got} exceeds cap {cap}")]
    CardinalityCap { got: usize, cap: usize },

    /// An iterative routine failed to reach its stopping criterion.
    #[error(
        "{algorithm} did not converge after {iterations} iterations (residual {residual:.3e})"
    )]
    NotConverged {
        algorithm: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// An operation was invoked on an object that fails its precondition.
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, SrdpError>;
