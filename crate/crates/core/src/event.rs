//! Events whose probabilities the bounds constrain, and a step-wise evaluator
//! used by both the Monte Carlo estimators and exact enumeration.

use serde::{Deserialize, Serialize};

use crate::distributions::Family;
use crate::error::{Error, Result};
use crate::report::digest;
use crate::shape::{ScaleFunction, ShapeFunction, WeightSequence};

/// Which partial-sum process an event is read on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Process {
    /// S_k
    S,
    /// u_k = Σ X_i⁺
    U,
    /// v_k = Σ X_i⁻
    V,
}

impl Process {
    #[inline]
    pub fn pick(self, s: f64, u: f64, v: f64) -> f64 {
        match self {
            Process::S => s,
            Process::U => u,
            Process::V => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sided {
    /// |S_k| / b_k
    Abs,
    /// S_k / b_k
    Upper,
}

/// `max_{m<=k<=n} (|S_k| or S_k) / b_k` exceeds `epsilon`; `>=` when
/// `inclusive`, `>` otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaxEvent {
    pub weights: WeightSequence,
    pub epsilon: f64,
    pub m: usize,
    pub n: usize,
    pub sided: Sided,
    pub inclusive: bool,
}

impl MaxEvent {
    pub fn validate(&self) -> Result<()> {
        if self.m < 1 || self.m > self.n {
            return Err(Error::IndexRange { m: self.m, n: self.n });
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::domain("epsilon", format!("need epsilon > 0, got {}", self.epsilon)));
        }
        self.weights.materialize(self.n).map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    /// φ(T_k) <= χ(b_k) for all 1 <= k <= n (A_n when T = S).
    AllWithin {
        process: Process,
        phi: ShapeFunction,
        chi: ScaleFunction,
        weights: WeightSequence,
        n: usize,
    },
    MaxExceeds(MaxEvent),
}

impl Event {
    pub fn all_within(phi: ShapeFunction, chi: ScaleFunction, weights: WeightSequence, n: usize) -> Self {
        Event::AllWithin {
            process: Process::S,
            phi,
            chi,
            weights,
            n,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Event::AllWithin { n, .. } => *n,
            Event::MaxExceeds(e) => e.n,
        }
    }
}

/// Identifies the probability a bound or an estimate refers to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventKey {
    pub sequence: Option<Family>,
    pub event: Event,
}

impl EventKey {
    pub fn new(sequence: Option<Family>, event: Event) -> Self {
        Self { sequence, event }
    }

    pub fn digest(&self) -> String {
        digest(self)
    }
}

/// Outcome of feeding one more step of a path to an [`EventEvaluator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Undecided,
    Decided(bool),
}

/// Precomputed per-k thresholds for fast path evaluation.
#[derive(Debug, Clone)]
pub struct EventEvaluator {
    kind: EvalKind,
    n: usize,
}

#[derive(Debug, Clone)]
enum EvalKind {
    AllWithin {
        process: Process,
        phi: ShapeFunction,
        chi: Vec<f64>,
    },
    MaxExceeds {
        b: Vec<f64>,
        epsilon: f64,
        m: usize,
        sided: Sided,
        inclusive: bool,
    },
}

impl EventEvaluator {
    pub fn new(event: &Event) -> Result<Self> {
        match event {
            Event::AllWithin {
                process,
                phi,
                chi,
                weights,
                n,
            } => {
                phi.validate()?;
                chi.validate()?;
                let b = weights.materialize(*n)?;
                let chi = b.iter().map(|&bk| chi.eval(bk)).collect::<Result<Vec<_>>>()?;
                Ok(Self {
                    kind: EvalKind::AllWithin {
                        process: *process,
                        phi: *phi,
                        chi,
                    },
                    n: *n,
                })
            }
            Event::MaxExceeds(e) => {
                e.validate()?;
                Ok(Self {
                    kind: EvalKind::MaxExceeds {
                        b: e.weights.materialize(e.n)?,
                        epsilon: e.epsilon,
                        m: e.m,
                        sided: e.sided,
                        inclusive: e.inclusive,
                    },
                    n: e.n,
                })
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Feed step `k` (1-based) with the running S_k, u_k, v_k.
    #[inline]
    pub fn step(&self, k: usize, s: f64, u: f64, v: f64) -> Step {
        match &self.kind {
            EvalKind::AllWithin { process, phi, chi } => {
                if phi.eval(process.pick(s, u, v)) > chi[k - 1] {
                    Step::Decided(false)
                } else {
                    Step::Undecided
                }
            }
            EvalKind::MaxExceeds {
                b,
                epsilon,
                m,
                sided,
                inclusive,
            } => {
                if k < *m {
                    return Step::Undecided;
                }
                let t = match sided {
                    Sided::Abs => s.abs(),
                    Sided::Upper => s,
                } / b[k - 1];
                let hit = if *inclusive { t >= *epsilon } else { t > *epsilon };
                if hit {
                    Step::Decided(true)
                } else {
                    Step::Undecided
                }
            }
        }
    }

    /// Value of the event when no step decided it.
    pub fn undecided_outcome(&self) -> bool {
        matches!(self.kind, EvalKind::AllWithin { .. })
    }

    /// Evaluates the event on a full increment path.
    pub fn evaluate(&self, x: &[f64]) -> bool {
        let (mut s, mut u, mut v) = (0.0, 0.0, 0.0);
        for (i, &xi) in x.iter().take(self.n).enumerate() {
            s += xi;
            u += xi.max(0.0);
            v += (-xi).max(0.0);
            if let Step::Decided(out) = self.step(i + 1, s, u, v) {
                return out;
            }
        }
        self.undecided_outcome()
    }
}
