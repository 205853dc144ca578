//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by validation, linear algebra, parsing and simulation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (deviation {deviation:.3e}, tolerance {tolerance:.3e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e} below {threshold:.3e})")]
    NotPsd { eigenvalue: f64, threshold: f64 },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("not a density matrix: {reason}")]
    NotDensity { reason: String },

    #[error("state norm is {norm}, expected 1 within 1e-8")]
    BadNorm { norm: f64 },

    #[error("POVM element has eigenvalue {eigenvalue} outside [0, 1]")]
    NotPovm { eigenvalue: f64 },

    #[error("parse error ({context}): {message}")]
    Parse { context: String, message: String },

    #[error("outcome {bit} has probability {prob:.3e} below 1e-12; conditional state undefined")]
    DegenerateOutcome { bit: u8, prob: f64 },

    #[error("rho and E0 do not commute (commutator Frobenius norm {norm:.3e})")]
    NotAligned { norm: f64 },

    #[error("value {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },

    #[error("dimension {dim} exceeds limit {limit} for brute-force search")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("search dimension {dim} outside 2..=8")]
    BadDimension { dim: usize },

    #[error("unsupported strategy: {reason}")]
    UnsupportedStrategy { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
