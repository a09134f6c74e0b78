use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes across the profile, spectral, and cylinder subsystems.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {detail}")]
    InvalidParameter { name: &'static str, detail: String },

    #[error("step size underflow at s = {s:.6e} (h = {h:.3e}); the system should not be stiff here")]
    StepSizeUnderflow { s: f64, h: f64 },

    #[error("warping function became non-positive at s = {s:.6e}; wrong solution branch")]
    NonPositiveWarp { s: f64 },

    #[error("tip expansion residual {residual:.3e} at s = {s:.3e} exceeds tolerance {tolerance:.3e}")]
    SeriesNotConverged { s: f64, residual: f64, tolerance: f64 },

    #[error("level value r = {r:.6e} outside profile f-range [{lo:.6e}, {hi:.6e}]")]
    LevelOutOfRange { r: f64, lo: f64, hi: f64 },

    #[error("fit window [{lo:.3e}, {hi:.3e}] not covered by the profile")]
    WindowOutOfRange { lo: f64, hi: f64 },

    #[error("need at least {min} samples for a rate fit, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("Galerkin matrix asymmetry {asymmetry:.3e} exceeds {limit:.1e}; assembly bug")]
    AsymmetricOperator { asymmetry: f64, limit: f64 },

    #[error("quadrature degree {degree} insufficient: {detail}")]
    QuadratureDegree { degree: usize, detail: String },

    #[error("matrix factorization failed: {0}")]
    Factorization(&'static str),

    #[error("malformed profile data: {0}")]
    MalformedProfile(String),

    #[error("malformed quadrature file: {0}")]
    MalformedQuadrature(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(name: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            detail: detail.into(),
        }
    }
}
