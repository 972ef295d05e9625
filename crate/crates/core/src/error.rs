use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not Hermitian: ||A - A'|| = {residual:.3e} exceeds {tolerance:.1e}")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("Jacobi eigensolver did not converge within {0} sweeps")]
    EigenNoConvergence(usize),

    #[error("state vector is not normalized: |norm - 1| = {0:.3e}")]
    NotNormalized(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("noise rate {0} outside [0, 1)")]
    RateOutOfRange(f64),

    #[error("expectation value has imaginary residue {0:.3e}")]
    ImaginaryResidue(f64),

    #[error("training diverged at epoch {epoch}: {reason}")]
    TrainingDiverged { epoch: usize, reason: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
