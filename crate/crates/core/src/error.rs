use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("matrix is not symplectic (max deviation {deviation:e})")]
    NotSymplectic { deviation: f64 },

    #[error("b block is not invertible (|det b| = {det:e}); use the composition fallback or a different chart")]
    NonInvertibleBBlock { det: f64 },

    #[error("quadrature rows do not commute (max |row_i J row_j| = {deviation:e})")]
    NotIsotropic { deviation: f64 },

    #[error("quadrature rows are linearly dependent")]
    RankDeficient,

    #[error("Gaussian state is not pure (det gamma = {det:e}, expected {expected:e})")]
    NotPure { det: f64, expected: f64 },

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    Asymmetric(f64),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("invalid Renyi order: {0}")]
    InvalidOrder(String),

    #[error("density has negative entry {0:e}")]
    NegativeDensity(f64),

    #[error("problem too large for direct quadrature: {0}")]
    SizeGuardExceeded(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
