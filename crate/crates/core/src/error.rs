use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis mismatch between operands")]
    BasisMismatch,

    #[error("numeric integrity: {0}")]
    NumericIntegrity(String),

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("eigensolver did not converge")]
    EigenNonConvergence,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("size cap exceeded: {what} (limit {limit})")]
    SizeCap { what: String, limit: usize },

    #[error("boolean function is neither constant nor balanced (mu_f = {mu})")]
    NotConstantOrBalanced { mu: f64 },

    #[error("final-state overlap C(1) unavailable: problem has no known phi1 and no override was given")]
    MissingOverlap,

    #[error("integration quality: cumulative norm drift {drift:e} exceeds 1e-6; increase the step count")]
    IntegrationQuality { drift: f64 },

    #[error("property violation: {what} at sample {index} (lambda = {lambda}, slack = {slack:e})")]
    PropertyViolation {
        what: String,
        index: usize,
        lambda: f64,
        slack: f64,
    },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
