//! Shape function φ, scale function χ and weight sequence b_k.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Convex shape function applied to partial sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShapeFunction {
    /// φ(x) = |x|^nu
    AbsPower { nu: f64 },
    /// φ(x) = max(x, 0)^r
    PositivePartPower { r: f64 },
}

impl ShapeFunction {
    pub fn validate(&self) -> Result<()> {
        let (name, p) = match *self {
            ShapeFunction::AbsPower { nu } => ("nu", nu),
            ShapeFunction::PositivePartPower { r } => ("r", r),
        };
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::domain(name, format!("exponent must be >= 1, got {p}")));
        }
        Ok(())
    }

    pub fn exponent(&self) -> f64 {
        match *self {
            ShapeFunction::AbsPower { nu } => nu,
            ShapeFunction::PositivePartPower { r } => r,
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            ShapeFunction::AbsPower { nu } => pow(x.abs(), nu),
            ShapeFunction::PositivePartPower { r } => pow(x.max(0.0), r),
        }
    }

    /// The analytic subadditivity constant 2^(p-1).
    pub fn k_constant(&self) -> f64 {
        (self.exponent() - 1.0).exp2()
    }
}

#[inline]
fn pow(base: f64, p: f64) -> f64 {
    if p == 1.0 {
        base
    } else if p == 2.0 {
        base * base
    } else {
        base.powf(p)
    }
}

pub fn phi_eval(phi: &ShapeFunction, x: f64) -> f64 {
    phi.eval(x)
}

/// Analytic K with a grid check of sup φ(x+y) / (φ(x) + φ(y)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubadditivityCertificate {
    pub k: f64,
    pub checked_grid_max_ratio: f64,
    pub grid_description: String,
}

/// Magnitudes per sign per variable in the certificate grid.
pub const CERTIFICATE_GRID_POINTS: usize = 61;

fn certificate_grid() -> Vec<f64> {
    let steps = (CERTIFICATE_GRID_POINTS - 1) as f64;
    let magnitudes = (0..CERTIFICATE_GRID_POINTS).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / steps));
    let mut grid: Vec<f64> = magnitudes.clone().map(|m| -m).collect();
    grid.extend(magnitudes);
    grid
}

pub fn subadditivity_constant(phi: &ShapeFunction) -> Result<SubadditivityCertificate> {
    phi.validate()?;
    let k = phi.k_constant();
    let grid = certificate_grid();
    let mut max_ratio = 0.0f64;
    for &x in &grid {
        for &y in &grid {
            let denom = phi.eval(x) + phi.eval(y);
            if denom > 0.0 {
                max_ratio = max_ratio.max(phi.eval(x + y) / denom);
            }
        }
    }
    if max_ratio > k + 1e-9 {
        return Err(Error::Certificate { ratio: max_ratio, k });
    }
    Ok(SubadditivityCertificate {
        k,
        checked_grid_max_ratio: max_ratio,
        grid_description: format!(
            "x, y in ±[1e-3, 1e3], {CERTIFICATE_GRID_POINTS} log-spaced magnitudes per sign"
        ),
    })
}

/// Positive nondecreasing scale function χ(b).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScaleFunction {
    /// χ(b) = epsilon * b
    Linear { epsilon: f64 },
    /// χ(b) = epsilon * b^rho
    Power { epsilon: f64, rho: f64 },
}

impl ScaleFunction {
    pub fn validate(&self) -> Result<()> {
        let epsilon = self.epsilon();
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::domain("epsilon", format!("need epsilon > 0, got {epsilon}")));
        }
        if let ScaleFunction::Power { rho, .. } = *self {
            if !(rho >= 1.0 && rho.is_finite()) {
                return Err(Error::domain("rho", format!("need rho >= 1, got {rho}")));
            }
        }
        Ok(())
    }

    pub fn epsilon(&self) -> f64 {
        match *self {
            ScaleFunction::Linear { epsilon } | ScaleFunction::Power { epsilon, .. } => epsilon,
        }
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        match *self {
            ScaleFunction::Linear { .. } => ScaleFunction::Linear { epsilon },
            ScaleFunction::Power { rho, .. } => ScaleFunction::Power { epsilon, rho },
        }
    }

    pub fn eval(&self, b: f64) -> Result<f64> {
        if !(b > 0.0) {
            return Err(Error::domain("b", format!("scale argument must be > 0, got {b}")));
        }
        Ok(match *self {
            ScaleFunction::Linear { epsilon } => epsilon * b,
            ScaleFunction::Power { epsilon, rho } => epsilon * b.powf(rho),
        })
    }
}

pub fn chi_eval(chi: &ScaleFunction, b: f64) -> Result<f64> {
    chi.eval(b)
}

/// Weight sequence 0 = b_0 < b_1 <= b_2 <= ...
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSequence {
    /// b_k = k^beta
    Power { beta: f64 },
    /// b_k = ln(k + 1)
    Log,
    Custom { values: Vec<f64> },
}

impl WeightSequence {
    /// b_1..b_n. Custom lists must hold at least `n` entries.
    pub fn materialize(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            WeightSequence::Power { beta } => {
                if !(*beta >= 0.0 && beta.is_finite()) {
                    return Err(Error::domain("beta", format!("need beta >= 0, got {beta}")));
                }
                Ok((1..=n).map(|k| (k as f64).powf(*beta)).collect())
            }
            WeightSequence::Log => Ok((1..=n).map(|k| (k as f64 + 1.0).ln()).collect()),
            WeightSequence::Custom { values } => {
                if values.len() < n {
                    return Err(Error::Validation {
                        index: values.len() + 1,
                        reason: format!("custom weight list has {} entries, need {n}", values.len()),
                    });
                }
                validate_weights(&values[..n])?;
                Ok(values[..n].to_vec())
            }
        }
    }

    /// Whether b_k → ∞. Finite custom lists cannot establish this.
    pub fn is_unbounded(&self) -> bool {
        match self {
            WeightSequence::Power { beta } => *beta > 0.0,
            WeightSequence::Log => true,
            WeightSequence::Custom { .. } => false,
        }
    }
}

pub fn weights_materialize(w: &WeightSequence, n: usize) -> Result<Vec<f64>> {
    w.materialize(n)
}

/// Checks 0 < b_1 <= ... <= b_n, reporting the first bad 1-based index.
pub fn validate_weights(b: &[f64]) -> Result<()> {
    let mut prev = 0.0;
    for (i, &x) in b.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::NonFinite { index: i + 1 });
        }
        if x <= 0.0 {
            return Err(Error::Validation {
                index: i + 1,
                reason: format!("weight must be positive, got {x}"),
            });
        }
        if x < prev {
            return Err(Error::Validation {
                index: i + 1,
                reason: format!("weights must be nondecreasing ({x} < {prev})"),
            });
        }
        prev = x;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn phi_examples() {
        assert_eq!(phi_eval(&ShapeFunction::AbsPower { nu: 2.0 }, -3.0), 9.0);
        assert_eq!(phi_eval(&ShapeFunction::PositivePartPower { r: 1.0 }, -5.0), 0.0);
        assert_eq!(phi_eval(&ShapeFunction::AbsPower { nu: 1.0 }, 2.5), 2.5);
    }

    #[test]
    fn k_constants() {
        assert_eq!(subadditivity_constant(&ShapeFunction::AbsPower { nu: 1.0 }).unwrap().k, 1.0);
        let c2 = subadditivity_constant(&ShapeFunction::AbsPower { nu: 2.0 }).unwrap();
        assert_eq!(c2.k, 2.0);
        assert!(c2.checked_grid_max_ratio >= 2.0 - 1e-6);
        let p2 = subadditivity_constant(&ShapeFunction::PositivePartPower { r: 2.0 }).unwrap();
        assert_eq!(p2.k, 2.0);
        assert!(p2.checked_grid_max_ratio >= 2.0 - 1e-6);
    }

    #[test]
    fn independent_grid_oracle_for_nu_two() {
        // brute force over a denser linear grid, independent of the log grid above
        let phi = ShapeFunction::AbsPower { nu: 2.0 };
        let mut best = 0.0f64;
        for i in -200..=200 {
            for j in -200..=200 {
                let (x, y) = (i as f64 * 0.05, j as f64 * 0.05);
                let d = phi.eval(x) + phi.eval(y);
                if d > 0.0 {
                    best = best.max(phi.eval(x + y) / d);
                }
            }
        }
        assert!((best - 2.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_exponent_rejected() {
        assert!(subadditivity_constant(&ShapeFunction::AbsPower { nu: 0.5 }).is_err());
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi_eval(&ScaleFunction::Linear { epsilon: 0.5 }, 4.0).unwrap(), 2.0);
        assert_eq!(chi_eval(&ScaleFunction::Power { epsilon: 1.0, rho: 2.0 }, 3.0).unwrap(), 9.0);
        assert!(chi_eval(&ScaleFunction::Linear { epsilon: 1.0 }, 0.0).is_err());
        assert!(chi_eval(&ScaleFunction::Linear { epsilon: 1.0 }, -1.0).is_err());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weights_materialize(&WeightSequence::Power { beta: 1.0 }, 4).unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
        let log = weights_materialize(&WeightSequence::Log, 3).unwrap();
        assert_eq!(log, vec![2f64.ln(), 3f64.ln(), 4f64.ln()]);
        match weights_materialize(&WeightSequence::Custom { values: vec![1.0, 0.5] }, 2) {
            Err(Error::Validation { index, .. }) => assert_eq!(index, 2),
            other => panic!("expected validation error, got {other:?}"),
        }
        match weights_materialize(&WeightSequence::Custom { values: vec![0.0, 1.0] }, 2) {
            Err(Error::Validation { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    fn shapes() -> impl Strategy<Value = ShapeFunction> {
        prop_oneof![
            (1.0f64..4.0).prop_map(|nu| ShapeFunction::AbsPower { nu }),
            (1.0f64..4.0).prop_map(|r| ShapeFunction::PositivePartPower { r }),
        ]
    }

    proptest! {
        #[test]
        fn shape_hypotheses_hold(phi in shapes(), x in 0.0f64..100.0, y in 0.0f64..100.0) {
            prop_assert_eq!(phi.eval(0.0), 0.0);
            prop_assert!(phi.eval(x) >= 0.0);
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            prop_assert!(phi.eval(lo) <= phi.eval(hi));
            let mid = phi.eval((x + y) / 2.0);
            prop_assert!(mid <= (phi.eval(x) + phi.eval(y)) / 2.0 * (1.0 + 1e-12) + 1e-300);
        }

        #[test]
        fn power_subadditivity(nu in 1.0f64..4.0, x in -1e3f64..1e3, y in -1e3f64..1e3) {
            let phi = ShapeFunction::AbsPower { nu };
            let lhs = phi.eval(x + y);
            let rhs = phi.k_constant() * (phi.eval(x) + phi.eval(y));
            prop_assert!(lhs <= rhs * (1.0 + 1e-9) + 1e-300);
        }

        #[test]
        fn chi_and_weights_monotone(eps in 0.01f64..10.0, rho in 1.0f64..3.0, b in 0.01f64..100.0, db in 0.0f64..100.0, beta in 0.0f64..2.0) {
            for chi in [ScaleFunction::Linear { epsilon: eps }, ScaleFunction::Power { epsilon: eps, rho }] {
                prop_assert!(chi.eval(b + db).unwrap() >= chi.eval(b).unwrap());
            }
            let w = WeightSequence::Power { beta }.materialize(50).unwrap();
            prop_assert!(w.windows(2).all(|p| p[0] <= p[1]));
        }
    }
}
