use thiserror::Error;

/// Errors produced while constructing operators and running the kick loop.
#[derive(Debug, Error)]
pub enum Error {
    #[error("Fock dimension must be at least {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state norm deviates from unity by {deviation:.3e} (tolerance {tol:.1e})")]
    NotNormalized { deviation: f64, tol: f64 },

    #[error("matrix is not Hermitian: max |M - M^dag| = {deviation:.3e} (tolerance {tol:.1e})")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("Fock label ({m},{n}) outside basis ({dim_a},{dim_b})")]
    LabelOutOfRange {
        m: usize,
        n: usize,
        dim_a: usize,
        dim_b: usize,
    },

    #[error("tracked labels must be distinct: ({0},{1}) repeated")]
    DuplicateLabel(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigendecomposition failed: {0}")]
    Eigen(#[from] ndarray_linalg::error::LinalgError),
}

pub type Result<T> = std::result::Result<T, Error>;
