//! Empirical check of the demimartingale inequality
//! E[(T_{j+1} - T_j) g(T_1, ..., T_j)] >= 0 over a finite family of
//! nonnegative, componentwise nondecreasing test functions g.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{mean_and_se, quantile};
use crate::sequences::{Trajectory, TrajectoryBatch};
use crate::shape::ShapeFunction;

use super::interval::normal_upper_quantile;

pub const MIN_DEMI_REPLICATIONS: usize = 1_000;

/// Quantile of |T_j| used to clip the unbounded test functions.
pub const CLIP_QUANTILE: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "process", rename_all = "snake_case")]
pub enum DemiProcess {
    S,
    U,
    V,
    /// T_k = φ(S_k⁺)
    PhiOfSPlus { phi: ShapeFunction },
}

impl DemiProcess {
    fn path(&self, t: &Trajectory) -> Vec<f64> {
        match self {
            DemiProcess::S => t.s.clone(),
            DemiProcess::U => t.u.clone(),
            DemiProcess::V => t.v.clone(),
            DemiProcess::PhiOfSPlus { phi } => t.s.iter().map(|&s| phi.eval(s.max(0.0))).collect(),
        }
    }
}

/// Which test functions to include.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestFamily {
    #[serde(default = "yes")]
    pub constant: bool,
    #[serde(default = "yes")]
    pub last_coordinate: bool,
    #[serde(default = "yes")]
    pub running_max: bool,
    #[serde(default = "default_quantiles")]
    pub threshold_quantiles: Vec<f64>,
}

fn yes() -> bool {
    true
}

fn default_quantiles() -> Vec<f64> {
    vec![0.25, 0.5, 0.75]
}

impl Default for TestFamily {
    fn default() -> Self {
        Self {
            constant: true,
            last_coordinate: true,
            running_max: true,
            threshold_quantiles: default_quantiles(),
        }
    }
}

impl TestFamily {
    pub fn constant_only() -> Self {
        Self {
            constant: true,
            last_coordinate: false,
            running_max: false,
            threshold_quantiles: Vec::new(),
        }
    }

    pub fn size(&self) -> usize {
        usize::from(self.constant)
            + usize::from(self.last_coordinate)
            + usize::from(self.running_max)
            + self.threshold_quantiles.len()
    }

    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if self.constant {
            parts.push("g = 1".to_string());
        }
        if self.last_coordinate {
            parts.push(format!("g = clip(t_j, -c, c) + c, c = {CLIP_QUANTILE}-quantile of |T_j|"));
        }
        if self.running_max {
            parts.push(format!(
                "g = clip(max_i t_i, -c, c) + c, c = {CLIP_QUANTILE}-quantile of |max_i T_i|"
            ));
        }
        for q in &self.threshold_quantiles {
            parts.push(format!("g = 1{{t_j > q}}, q = {q}-quantile of T_j"));
        }
        parts.join("; ")
    }

    fn validate(&self) -> Result<()> {
        if self.size() == 0 {
            return Err(Error::Config("test-function family is empty".into()));
        }
        for (i, q) in self.threshold_quantiles.iter().enumerate() {
            if !(0.0..=1.0).contains(q) {
                return Err(Error::Validation {
                    index: i + 1,
                    reason: format!("threshold quantile {q} outside [0, 1]"),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairMargin {
    pub j: usize,
    pub g: String,
    pub margin: f64,
    pub se: f64,
    pub flagged: bool,
    /// Replicates whose individual product is negative.
    pub negative_pointwise: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemiCheckReport {
    pub process: DemiProcess,
    pub replications: usize,
    pub n: usize,
    pub level: f64,
    pub z: f64,
    pub family: String,
    pub pairs: Vec<PairMargin>,
    pub flagged_count: usize,
    pub allowance: usize,
    pub flagged_j: Vec<usize>,
    pub negative_pointwise_margins: usize,
    pub passed: bool,
}

/// Runs the check for every j in 1..n-1 and every g in `family`; a pair is
/// flagged when its margin lies below -z·se with a Bonferroni-corrected z.
pub fn demi_check(
    batch: &TrajectoryBatch,
    process: DemiProcess,
    family: &TestFamily,
    level: f64,
) -> Result<DemiCheckReport> {
    family.validate()?;
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::domain("level", format!("need 0 < level < 1, got {level}")));
    }
    let reps = batch.replications();
    if reps < MIN_DEMI_REPLICATIONS {
        return Err(Error::Config(format!(
            "demimartingale check needs at least {MIN_DEMI_REPLICATIONS} replications, got {reps}"
        )));
    }
    if let DemiProcess::PhiOfSPlus { phi } = &process {
        phi.validate()?;
    }
    let n = batch.n();
    if n < 2 {
        return Err(Error::IndexRange { m: 2, n });
    }

    let paths: Vec<Vec<f64>> = batch.rows.iter().map(|t| process.path(t)).collect();
    let mut running_max: Vec<f64> = vec![f64::NEG_INFINITY; reps];
    let total_pairs = (n - 1) * family.size();
    let z = normal_upper_quantile((1.0 - level) / total_pairs as f64);

    let mut pairs = Vec::with_capacity(total_pairs);
    let mut products = vec![0.0; reps];
    for j in 1..n {
        let col: Vec<f64> = paths.iter().map(|p| p[j - 1]).collect();
        let incr: Vec<f64> = paths.iter().map(|p| p[j] - p[j - 1]).collect();
        for (m, &t) in running_max.iter_mut().zip(&col) {
            *m = m.max(t);
        }

        let mut push = |name: String, g: &dyn Fn(usize) -> f64| {
            let mut negative = 0;
            for r in 0..reps {
                products[r] = incr[r] * g(r);
                negative += usize::from(products[r] < 0.0);
            }
            let (margin, se) = mean_and_se(&products);
            pairs.push(PairMargin {
                j,
                g: name,
                margin,
                se,
                flagged: margin < -z * se,
                negative_pointwise: negative,
            });
        };

        if family.constant {
            push("constant".into(), &|_| 1.0);
        }
        if family.last_coordinate {
            let abs: Vec<f64> = col.iter().map(|t| t.abs()).collect();
            let c = quantile(&abs, CLIP_QUANTILE);
            push("last_coordinate".into(), &|r| col[r].clamp(-c, c) + c);
        }
        if family.running_max {
            let abs: Vec<f64> = running_max.iter().map(|t| t.abs()).collect();
            let c = quantile(&abs, CLIP_QUANTILE);
            push("running_max".into(), &|r| running_max[r].clamp(-c, c) + c);
        }
        for &p in &family.threshold_quantiles {
            let q = quantile(&col, p);
            push(format!("threshold_q{p}"), &|r| f64::from(u8::from(col[r] > q)));
        }
    }

    let flagged_count = pairs.iter().filter(|p| p.flagged).count();
    let mut flagged_j: Vec<usize> = pairs.iter().filter(|p| p.flagged).map(|p| p.j).collect();
    flagged_j.dedup();
    let negative_pointwise_margins = pairs.iter().map(|p| p.negative_pointwise).sum();
    let allowance = 0;
    Ok(DemiCheckReport {
        process,
        replications: reps,
        n,
        level,
        z,
        family: family.describe(),
        pairs,
        flagged_count,
        allowance,
        flagged_j,
        negative_pointwise_margins,
        passed: flagged_count <= allowance,
    })
}
