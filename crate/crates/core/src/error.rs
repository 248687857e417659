use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the matrix, block and verification layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e}, allowed {allowed:.3e})")]
    NotHermitian { asymmetry: f64, allowed: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eig:.6e})")]
    NotPsd {
        min_eig: f64,
        witness: Vec<Complex64>,
    },

    #[error("matrix is not positive definite (minimum eigenvalue {min_eig:.6e}, threshold {threshold:.3e})")]
    NotPd { min_eig: f64, threshold: f64 },

    #[error("block is not PPT (gap {gap:.6e})")]
    NotPpt { gap: f64 },

    #[error("rejection sampler exhausted its budget of {budget} draws (acceptance rate {acceptance_rate:.4})")]
    BudgetExhausted { budget: usize, acceptance_rate: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
