use serde::{Deserialize, Serialize};

use crate::distributions::Family;
use crate::error::{Error, Result};
use crate::event::{Event, EventEvaluator, EventKey, Step};

/// Largest number of equally likely paths enumerated.
pub const MAX_STATES: u64 = 1 << 20;

/// Exact probability `favorable / total` over equally likely paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactProbability {
    pub favorable: u64,
    pub total: u64,
    pub probability: f64,
    pub event: EventKey,
    pub event_digest: String,
}

/// Enumerates every path of a finite, equally weighted support. Paths are
/// pruned as soon as the event is decided; the undecided completions are
/// counted in bulk.
pub fn enumerate_exact(family: &Family, event: &Event) -> Result<ExactProbability> {
    family.validate()?;
    let support = family
        .finite_support()
        .ok_or_else(|| Error::Config(format!("exact enumeration needs a finite support, got {family:?}")))?;
    let evaluator = EventEvaluator::new(event)?;
    let n = evaluator.n();
    let states = (support.len() as f64).powi(n as i32);
    if states > MAX_STATES as f64 {
        return Err(Error::StateSpaceTooLarge {
            states,
            limit: MAX_STATES,
        });
    }
    let width = support.len() as u64;
    let total = width.pow(n as u32);
    let favorable = count(&evaluator, &support, width, n, 1, 0.0, 0.0, 0.0);
    let key = EventKey::new(Some(*family), event.clone());
    Ok(ExactProbability {
        favorable,
        total,
        probability: favorable as f64 / total as f64,
        event_digest: key.digest(),
        event: key,
    })
}

#[allow(clippy::too_many_arguments)]
fn count(eval: &EventEvaluator, support: &[f64], width: u64, n: usize, k: usize, s: f64, u: f64, v: f64) -> u64 {
    if k > n {
        return u64::from(eval.undecided_outcome());
    }
    let remaining = width.pow((n - k) as u32);
    support
        .iter()
        .map(|&x| {
            let (s, u, v) = (s + x, u + x.max(0.0), v + (-x).max(0.0));
            match eval.step(k, s, u, v) {
                Step::Decided(true) => remaining,
                Step::Decided(false) => 0,
                Step::Undecided => count(eval, support, width, n, k + 1, s, u, v),
            }
        })
        .sum()
}
