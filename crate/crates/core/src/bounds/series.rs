//! Numerical check of the series condition Σ α_k b_k^(-r) < ∞.
//!
//! This is a finite-horizon heuristic, not a convergence proof. With
//! δ_k = α_k b_k^(-r), T_N = Σ_{k<=N} δ_k and the tail window
//! W = {N - w + 1, ..., N}:
//!
//! * converging: T_N = 0, or Σ_W δ_k < 1e-3 · T_N and δ is decreasing on W
//!   (mean over the later half of W not above the mean over the earlier half);
//! * diverging: k·δ_k stays bounded below on W, i.e. min_W k·δ_k > 0 and
//!   min_W k·δ_k >= 0.9 · max_W k·δ_k (harmonic-like behaviour);
//! * inconclusive otherwise.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::compensated_sum;
use crate::shape::{ScaleFunction, WeightSequence};

use super::MomentProfile;

const CONVERGING_TAIL_RATIO: f64 = 1e-3;
const DIVERGING_FLOOR_RATIO: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SllnSeriesSpec {
    pub alpha: Vec<f64>,
    pub r: f64,
    pub weights: WeightSequence,
    /// Constant of the maximal-probability hypothesis; carried for the
    /// record, absorbed into `alpha` by the check.
    #[serde(default = "default_c")]
    pub c: f64,
}

fn default_c() -> f64 {
    1.0
}

impl SllnSeriesSpec {
    /// The strong-law series Σ [ΔE φ(u_k) + ΔE φ(v_k)] / χ(b_k) written in
    /// the α_k b_k^(-r) form: for χ(b) = ε b^ρ, α_k = Δ_k / ε and r = ρ.
    pub fn from_profile(mp: &MomentProfile, chi: &ScaleFunction, weights: WeightSequence) -> Self {
        let mut prev = 0.0;
        let alpha = (0..mp.n)
            .map(|k| {
                let cur = mp.e_phi_u[k] + mp.e_phi_v[k];
                let d = (cur - prev).max(0.0);
                prev = cur;
                d / chi.epsilon()
            })
            .collect();
        let r = match *chi {
            ScaleFunction::Linear { .. } => 1.0,
            ScaleFunction::Power { rho, .. } => rho,
        };
        Self {
            alpha,
            r,
            weights,
            c: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesVerdict {
    Converging,
    Diverging,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub horizon: usize,
    pub tail_window: usize,
    pub partial_sum: f64,
    pub tail_increment: f64,
    pub verdict: SeriesVerdict,
    pub method: String,
}

pub fn slln_series_check(spec: &SllnSeriesSpec, horizon: usize, tail_window: usize) -> Result<SeriesReport> {
    if tail_window == 0 || horizon < 2 * tail_window {
        return Err(Error::Config(format!(
            "need horizon >= 2 * tail_window > 0, got horizon {horizon}, window {tail_window}"
        )));
    }
    if !(spec.r > 0.0) {
        return Err(Error::domain("r", format!("need r > 0, got {}", spec.r)));
    }
    if !(spec.c > 0.0) {
        return Err(Error::domain("c", format!("need c > 0, got {}", spec.c)));
    }
    if spec.alpha.len() < horizon {
        return Err(Error::Validation {
            index: spec.alpha.len() + 1,
            reason: format!("alpha has {} entries, need {horizon}", spec.alpha.len()),
        });
    }
    if let Some(i) = spec.alpha[..horizon].iter().position(|a| !(*a >= 0.0) || !a.is_finite()) {
        return Err(Error::Validation {
            index: i + 1,
            reason: "alpha_k must be finite and nonnegative".into(),
        });
    }
    let b = spec.weights.materialize(horizon)?;
    let delta: Vec<f64> = spec.alpha[..horizon]
        .iter()
        .zip(&b)
        .map(|(a, bk)| a * bk.powf(-spec.r))
        .collect();
    let partial_sum = compensated_sum(delta.iter().copied());
    let start = horizon - tail_window;
    let window = &delta[start..];
    let tail_increment = compensated_sum(window.iter().copied());

    let mid = tail_window / 2;
    let early = compensated_sum(window[..mid].iter().copied()) / mid.max(1) as f64;
    let late = compensated_sum(window[mid..].iter().copied()) / (tail_window - mid) as f64;
    let decreasing = late <= early;

    let scaled = window.iter().enumerate().map(|(i, d)| (start + i + 1) as f64 * d);
    let (lo, hi) = scaled.fold((f64::INFINITY, 0.0f64), |(lo, hi), x| (lo.min(x), hi.max(x)));

    let verdict = if partial_sum == 0.0 || (tail_increment < CONVERGING_TAIL_RATIO * partial_sum && decreasing) {
        SeriesVerdict::Converging
    } else if lo > 0.0 && lo >= DIVERGING_FLOOR_RATIO * hi {
        SeriesVerdict::Diverging
    } else {
        SeriesVerdict::Inconclusive
    };
    Ok(SeriesReport {
        horizon,
        tail_window,
        partial_sum,
        tail_increment,
        verdict,
        method: "finite-horizon heuristic: tail-mass ratio 1e-3 for converging, \
                 k*delta_k floor ratio 0.9 for diverging"
            .into(),
    })
}
