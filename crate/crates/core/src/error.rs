use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "infinite occupation: beta = 0 with omega = {omega} (use a finite inverse temperature)"
    )]
    InfiniteOccupation { omega: f64 },

    #[error("bath mode count mismatch: expected {expected}, got {actual}")]
    ModeCountMismatch { expected: usize, actual: usize },

    #[error("cross-block required: bath-to-bath coefficients v_js were not computed for t = {t}")]
    CrossBlockRequired { t: f64 },

    #[error("oracle provenance required for {what}")]
    OracleRequired { what: &'static str },

    #[error("resource limit: {what} = {requested} exceeds {limit}")]
    ResourceLimit {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("truncation error: trace defect {defect:e} exceeds {tolerance:e}")]
    Truncation { defect: f64, tolerance: f64 },

    #[error("eigendecomposition failed: {0}")]
    Eigendecomposition(String),

    #[error("outside asymptotic regime: {0}")]
    OutsideRegime(String),

    #[error("thermal sample sanity gate failed for mode {mode}: mean |lambda|^2 = {mean}, expected {expected} +/- {stderr}")]
    SampleGate {
        mode: usize,
        mean: f64,
        expected: f64,
        stderr: f64,
    },
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
