use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{RandomSequenceSpec, SeedSpec};
use crate::error::{Error, Result};
use crate::numerics::{quantile, NeumaierSum};
use crate::sequences::COMPENSATED_THRESHOLD;
use crate::shape::{ScaleFunction, ShapeFunction, WeightSequence};

/// Summary across replicates of the trailing-window maxima at one checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointSummary {
    pub k: usize,
    pub window_start: usize,
    pub phi_ratio_median: f64,
    pub phi_ratio_q95: f64,
    pub abs_ratio_median: f64,
    pub abs_ratio_q95: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SllnTrajectoryReport {
    pub n: usize,
    pub replications: usize,
    pub checkpoints: Vec<CheckpointSummary>,
    /// The 0.95-quantile of max |S_k|/b_k strictly decreases across checkpoints.
    pub abs_q95_decreasing: bool,
    pub phi_q95_decreasing: bool,
}

impl SllnTrajectoryReport {
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        use crate::report::fmt_f64;
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            "k",
            "window_start",
            "phi_ratio_median",
            "phi_ratio_q95",
            "abs_ratio_median",
            "abs_ratio_q95",
        ])?;
        for c in &self.checkpoints {
            w.write_record([
                c.k.to_string(),
                c.window_start.to_string(),
                fmt_f64(c.phi_ratio_median),
                fmt_f64(c.phi_ratio_q95),
                fmt_f64(c.abs_ratio_median),
                fmt_f64(c.abs_ratio_q95),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn strictly_decreasing(values: impl Iterator<Item = f64>) -> bool {
    let v: Vec<f64> = values.collect();
    v.windows(2).all(|p| p[1] < p[0])
}

/// Streams each replicate once, tracking for every checkpoint k the maxima
/// of φ(S_i)/χ(b_i) and |S_i|/b_i over the window k/2 <= i <= k.
pub fn slln_trajectory(
    spec: &RandomSequenceSpec,
    phi: &ShapeFunction,
    chi: &ScaleFunction,
    w: &WeightSequence,
    replications: usize,
    master_seed: u64,
    checkpoints: &[usize],
) -> Result<SllnTrajectoryReport> {
    spec.validate()?;
    phi.validate()?;
    chi.validate()?;
    if !w.is_unbounded() {
        return Err(Error::HypothesisViolation {
            hypothesis: "weights b_k unbounded".into(),
            indices: vec![],
        });
    }
    if replications == 0 {
        return Err(Error::Config("replication count must be >= 1".into()));
    }
    if checkpoints.is_empty() {
        return Err(Error::Config("at least one checkpoint is required".into()));
    }
    for (i, pair) in checkpoints.windows(2).enumerate() {
        if pair[1] <= pair[0] {
            return Err(Error::Validation {
                index: i + 2,
                reason: "checkpoints must be strictly increasing".into(),
            });
        }
    }
    let n = spec.n;
    let last = *checkpoints.last().expect("nonempty");
    if checkpoints[0] < 1 || last > n {
        return Err(Error::IndexRange { m: checkpoints[0], n });
    }
    let b = w.materialize(last)?;
    let inv_chi: Vec<f64> = b.iter().map(|&bk| chi.eval(bk).map(f64::recip)).collect::<Result<_>>()?;
    let windows: Vec<(usize, usize)> = checkpoints.iter().map(|&k| ((k / 2).max(1), k)).collect();

    let family = spec.family;
    let compensated = last > COMPENSATED_THRESHOLD;
    // per replicate: (phi maxima, abs maxima) for each checkpoint
    let maxima: Vec<(Vec<f64>, Vec<f64>)> = (0..replications as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = SeedSpec::new(master_seed, r).rng();
            let mut acc = NeumaierSum::new();
            let mut plain = 0.0;
            let mut phi_max = vec![0.0f64; windows.len()];
            let mut abs_max = vec![0.0f64; windows.len()];
            for k in 1..=last {
                let x = family.sample_one(&mut rng);
                let s = if compensated {
                    acc.add(x);
                    acc.value()
                } else {
                    plain += x;
                    plain
                };
                let pr = phi.eval(s) * inv_chi[k - 1];
                let ar = s.abs() / b[k - 1];
                for (c, &(lo, hi)) in windows.iter().enumerate() {
                    if lo <= k && k <= hi {
                        phi_max[c] = phi_max[c].max(pr);
                        abs_max[c] = abs_max[c].max(ar);
                    }
                }
            }
            (phi_max, abs_max)
        })
        .collect();

    let summaries: Vec<CheckpointSummary> = windows
        .iter()
        .enumerate()
        .map(|(c, &(lo, hi))| {
            let pm: Vec<f64> = maxima.iter().map(|m| m.0[c]).collect();
            let am: Vec<f64> = maxima.iter().map(|m| m.1[c]).collect();
            CheckpointSummary {
                k: hi,
                window_start: lo,
                phi_ratio_median: quantile(&pm, 0.5),
                phi_ratio_q95: quantile(&pm, 0.95),
                abs_ratio_median: quantile(&am, 0.5),
                abs_ratio_q95: quantile(&am, 0.95),
            }
        })
        .collect();
    Ok(SllnTrajectoryReport {
        n,
        replications,
        abs_q95_decreasing: strictly_decreasing(summaries.iter().map(|c| c.abs_ratio_q95)),
        phi_q95_decreasing: strictly_decreasing(summaries.iter().map(|c| c.phi_ratio_q95)),
        checkpoints: summaries,
    })
}
