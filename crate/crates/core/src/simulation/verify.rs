use serde::{Deserialize, Serialize};

use crate::bounds::{BoundKind, BoundReport};
use crate::error::{Error, Result};

use super::exact::ExactProbability;
use super::interval::MonteCarloEstimate;

/// Slack allowed when comparing a bound with an exact probability.
pub const EXACT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub enum Evidence<'a> {
    Estimate(&'a MonteCarloEstimate),
    Exact(&'a ExactProbability),
}

impl Evidence<'_> {
    fn digest(&self) -> &str {
        match self {
            Evidence::Estimate(e) => &e.event_digest,
            Evidence::Exact(e) => &e.event_digest,
        }
    }

    /// (low, point, high)
    fn range(&self) -> (f64, f64, f64) {
        match self {
            Evidence::Estimate(e) => (e.ci_low, e.p_hat, e.ci_high),
            Evidence::Exact(e) => (e.probability, e.probability, e.probability),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Violation,
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub verdict: Verdict,
    pub bound_kind: BoundKind,
    pub bound_value: f64,
    pub bound_raw_value: f64,
    pub evidence: String,
    pub p: f64,
    pub p_low: f64,
    pub p_high: f64,
    pub event_digest: String,
}

/// Lower bounds are violated when the whole interval lies below the bound,
/// upper bounds when it lies above. Clamped bounds (lower 0, upper 1) are
/// vacuous.
pub fn verify_bound(evidence: Evidence<'_>, report: &BoundReport) -> Result<Verification> {
    if evidence.digest() != report.event_digest {
        return Err(Error::Incomparable {
            bound: report.event_digest.clone(),
            estimate: evidence.digest().to_string(),
        });
    }
    let (low, point, high) = evidence.range();
    let tol = match evidence {
        Evidence::Exact(_) => EXACT_TOLERANCE,
        Evidence::Estimate(_) => 0.0,
    };
    let lower = report.bound_kind.is_lower();
    let vacuous = if lower {
        report.raw_value <= 0.0
    } else {
        report.raw_value >= 1.0
    };
    let verdict = if vacuous {
        Verdict::Vacuous
    } else if (lower && high < report.value - tol) || (!lower && low > report.value + tol) {
        Verdict::Violation
    } else {
        Verdict::Consistent
    };
    Ok(Verification {
        verdict,
        bound_kind: report.bound_kind,
        bound_value: report.value,
        bound_raw_value: report.raw_value,
        evidence: match evidence {
            Evidence::Estimate(_) => "monte_carlo".into(),
            Evidence::Exact(_) => "exact".into(),
        },
        p: point,
        p_low: low,
        p_high: high,
        event_digest: report.event_digest.clone(),
    })
}
