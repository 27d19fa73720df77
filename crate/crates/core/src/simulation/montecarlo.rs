use rayon::prelude::*;

use crate::distributions::{RandomSequenceSpec, SeedSpec};
use crate::error::{Error, Result};
use crate::event::{Event, EventEvaluator, EventKey, MaxEvent, Step};
use crate::shape::{ScaleFunction, ShapeFunction, WeightSequence};

use super::interval::{MonteCarloEstimate, DEFAULT_LEVEL};

pub const MIN_EVENT_REPLICATIONS: usize = 1_000;

/// Estimates P(event) from `replications` paths; replicate `r` uses stream
/// `(master_seed, r)` and stops drawing once the event is decided.
pub fn estimate_event(
    spec: &RandomSequenceSpec,
    event: &Event,
    replications: usize,
    master_seed: u64,
    level: f64,
) -> Result<MonteCarloEstimate> {
    spec.validate()?;
    if replications < MIN_EVENT_REPLICATIONS {
        return Err(Error::Config(format!(
            "event estimation needs at least {MIN_EVENT_REPLICATIONS} replications, got {replications}"
        )));
    }
    let evaluator = EventEvaluator::new(event)?;
    let n = evaluator.n();
    if n > spec.n {
        return Err(Error::IndexRange { m: n, n: spec.n });
    }
    let family = spec.family;
    let successes: u64 = (0..replications as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = SeedSpec::new(master_seed, r).rng();
            let (mut s, mut u, mut v) = (0.0, 0.0, 0.0);
            for k in 1..=n {
                let x = family.sample_one(&mut rng);
                s += x;
                u += x.max(0.0);
                v += (-x).max(0.0);
                if let Step::Decided(hit) = evaluator.step(k, s, u, v) {
                    return u64::from(hit);
                }
            }
            u64::from(evaluator.undecided_outcome())
        })
        .sum();
    MonteCarloEstimate::from_counts(
        successes,
        replications as u64,
        level,
        EventKey::new(Some(family), event.clone()),
    )
}

/// P(max_{m<=k<=n} (|S_k| or S_k) / b_k exceeds ε).
pub fn estimate_max_event(
    spec: &RandomSequenceSpec,
    event: &MaxEvent,
    replications: usize,
    master_seed: u64,
) -> Result<MonteCarloEstimate> {
    estimate_event(
        spec,
        &Event::MaxExceeds(event.clone()),
        replications,
        master_seed,
        DEFAULT_LEVEL,
    )
}

/// P(A_n) = P(φ(S_k) <= χ(b_k) for all k <= n).
#[allow(non_snake_case)]
pub fn estimate_event_An(
    spec: &RandomSequenceSpec,
    phi: &ShapeFunction,
    chi: &ScaleFunction,
    w: &WeightSequence,
    n: usize,
    replications: usize,
    master_seed: u64,
) -> Result<MonteCarloEstimate> {
    estimate_event(
        spec,
        &Event::all_within(*phi, *chi, w.clone(), n),
        replications,
        master_seed,
        DEFAULT_LEVEL,
    )
}
