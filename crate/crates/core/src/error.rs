use serde::Serialize;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A distribution, shape or scale parameter lies outside its domain.
    #[error("parameter `{field}` out of domain: {reason}")]
    ParameterDomain { field: String, reason: String },

    /// A sequence input failed validation; `index` is 1-based.
    #[error("validation failed at index {index}: {reason}")]
    Validation { index: usize, reason: String },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("hypothesis `{hypothesis}` violated at k = {indices:?}")]
    HypothesisViolation {
        hypothesis: String,
        indices: Vec<usize>,
    },

    #[error("moment sequence is not integrable: {detail}")]
    NonIntegrable { detail: String },

    #[error("index range invalid: need 1 <= m <= n, got m = {m}, n = {n}")]
    IndexRange { m: usize, n: usize },

    #[error("state space too large for exact enumeration: {states} states (limit {limit})")]
    StateSpaceTooLarge { states: f64, limit: u64 },

    #[error("estimate and bound describe different events ({bound} vs {estimate})")]
    Incomparable { bound: String, estimate: String },

    #[error("subadditivity certificate failed: grid ratio {ratio} exceeds K = {k}")]
    Certificate { ratio: f64, k: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::ParameterDomain {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Stable machine-readable tag for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ParameterDomain { .. } => "parameter_domain",
            Error::Validation { .. } => "validation",
            Error::NonFinite { .. } => "non_finite",
            Error::HypothesisViolation { .. } => "hypothesis_violation",
            Error::NonIntegrable { .. } => "non_integrable",
            Error::IndexRange { .. } => "index_range",
            Error::StateSpaceTooLarge { .. } => "state_space_too_large",
            Error::Incomparable { .. } => "incomparable",
            Error::Certificate { .. } => "certificate",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }

    pub fn to_report(&self) -> ErrorReport {
        ErrorReport {
            error: self.kind(),
            message: self.to_string(),
        }
    }
}

/// JSON shape written when a command fails.
#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub error: &'static str,
    pub message: String,
}
