use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::event::EventKey;

pub const DEFAULT_LEVEL: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalMethod {
    Wilson,
    ExactClopperPearson,
}

/// A Monte Carlo probability estimate with a two-sided interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub p_hat: f64,
    pub successes: u64,
    pub replications: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub level: f64,
    pub method: IntervalMethod,
    pub event: EventKey,
    pub event_digest: String,
}

impl MonteCarloEstimate {
    /// Wilson interval, or Clopper–Pearson when p̂ is 0 or 1.
    pub fn from_counts(successes: u64, replications: u64, level: f64, event: EventKey) -> Result<Self> {
        let (ci_low, ci_high, method) = binomial_interval(successes, replications, level)?;
        let event_digest = event.digest();
        Ok(Self {
            p_hat: successes as f64 / replications as f64,
            successes,
            replications,
            ci_low,
            ci_high,
            level,
            method,
            event,
            event_digest,
        })
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("level", format!("need 0 < level < 1, got {level}")))
    }
}

/// Upper quantile z with P(Z > z) = tail for a standard normal Z.
pub fn normal_upper_quantile(tail: f64) -> f64 {
    Normal::standard().inverse_cdf(1.0 - tail)
}

pub fn wilson_interval(successes: u64, trials: u64, level: f64) -> Result<(f64, f64)> {
    check_level(level)?;
    if trials == 0 || successes > trials {
        return Err(Error::Config(format!("invalid binomial counts {successes}/{trials}")));
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z = normal_upper_quantile((1.0 - level) / 2.0);
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    Ok(((center - half).max(0.0).min(p), (center + half).min(1.0).max(p)))
}

pub fn clopper_pearson_interval(successes: u64, trials: u64, level: f64) -> Result<(f64, f64)> {
    check_level(level)?;
    if trials == 0 || successes > trials {
        return Err(Error::Config(format!("invalid binomial counts {successes}/{trials}")));
    }
    let tail = (1.0 - level) / 2.0;
    let (x, n) = (successes as f64, trials as f64);
    let low = if successes == 0 {
        0.0
    } else {
        Beta::new(x, n - x + 1.0).expect("positive shape").inverse_cdf(tail)
    };
    let high = if successes == trials {
        1.0
    } else {
        Beta::new(x + 1.0, n - x).expect("positive shape").inverse_cdf(1.0 - tail)
    };
    Ok((low, high))
}

pub fn binomial_interval(successes: u64, trials: u64, level: f64) -> Result<(f64, f64, IntervalMethod)> {
    if successes == 0 || successes == trials {
        let (lo, hi) = clopper_pearson_interval(successes, trials, level)?;
        Ok((lo, hi, IntervalMethod::ExactClopperPearson))
    } else {
        let (lo, hi) = wilson_interval(successes, trials, level)?;
        Ok((lo, hi, IntervalMethod::Wilson))
    }
}
