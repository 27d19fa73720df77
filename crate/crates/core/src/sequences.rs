//! Partial sums and the positive/negative-part decomposition
//! S_k = u_k - v_k with u_k = Σ X_i⁺ and v_k = Σ X_i⁻.
//!
//! All vectors are indexed k = 1..n; the S_0 = u_0 = v_0 = 0 convention is
//! implicit.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{sample_iid, RandomSequenceSpec, SeedSpec};
use crate::error::{Error, Result};
use crate::numerics::NeumaierSum;

/// Above this length prefix sums switch to compensated summation.
pub const COMPENSATED_THRESHOLD: usize = 10_000;

fn check_input(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::Validation {
            index: 1,
            reason: "empty increment vector".into(),
        });
    }
    match x.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite { index: i + 1 }),
        None => Ok(()),
    }
}

fn prefix_sums<I: Iterator<Item = f64>>(values: I, len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    if len > COMPENSATED_THRESHOLD {
        let mut acc = NeumaierSum::new();
        for v in values {
            acc.add(v);
            out.push(acc.value());
        }
    } else {
        let mut acc = 0.0;
        for v in values {
            acc += v;
            out.push(acc);
        }
    }
    out
}

pub fn partial_sums(x: &[f64]) -> Result<Vec<f64>> {
    check_input(x)?;
    Ok(prefix_sums(x.iter().copied(), x.len()))
}

/// Returns (u, v).
pub fn decompose(x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    check_input(x)?;
    let u = prefix_sums(x.iter().map(|v| v.max(0.0)), x.len());
    let v = prefix_sums(x.iter().map(|v| (-v).max(0.0)), x.len());
    Ok((u, v))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub x: Vec<f64>,
    pub s: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl Trajectory {
    pub fn from_increments(x: Vec<f64>) -> Result<Self> {
        let s = partial_sums(&x)?;
        let (u, v) = decompose(&x)?;
        Ok(Self { x, s, u, v })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// R independently generated trajectories; row `r` comes from stream
/// `(master_seed, r)`.
#[derive(Debug, Clone)]
pub struct TrajectoryBatch {
    pub spec: RandomSequenceSpec,
    pub master_seed: u64,
    pub rows: Vec<Trajectory>,
}

impl TrajectoryBatch {
    pub fn generate(spec: &RandomSequenceSpec, replications: usize, master_seed: u64) -> Result<Self> {
        spec.validate()?;
        if replications == 0 {
            return Err(Error::Config("replication count must be >= 1".into()));
        }
        let rows = (0..replications as u64)
            .into_par_iter()
            .map(|r| Trajectory::from_increments(sample_iid(spec, SeedSpec::new(master_seed, r))?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            spec: *spec,
            master_seed,
            rows,
        })
    }

    pub fn replications(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// Writes `replicate,k,x,s,u,v` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["replicate", "k", "x", "s", "u", "v"])?;
        for (r, t) in self.rows.iter().enumerate() {
            for k in 0..t.len() {
                w.write_record([
                    r.to_string(),
                    (k + 1).to_string(),
                    crate::report::fmt_f64(t.x[k]),
                    crate::report::fmt_f64(t.s[k]),
                    crate::report::fmt_f64(t.u[k]),
                    crate::report::fmt_f64(t.v[k]),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}
