//! Closed-form maximal-inequality bounds evaluated from moment data.
//!
//! Every bound has the shape `raw = leading + coefficient * Σ_k terms[k]`,
//! and `value` is `raw` clamped to [0, 1]. The per-term contributions are
//! kept in the report so the sum can be audited.

mod moments;
mod series;

pub use moments::{
    analytic_moment_profile, estimate_moment_profile, moment_profile, IntegrabilityDiagnostic, MomentProfile,
    MomentSource, Provenance, MIN_REPLICATIONS,
};
pub use series::{slln_series_check, SeriesReport, SeriesVerdict, SllnSeriesSpec};

use serde::{Deserialize, Serialize};

use crate::distributions::Family;
use crate::error::{Error, Result};
use crate::event::{Event, EventKey, MaxEvent, Process, Sided};
use crate::numerics::compensated_sum;
use crate::report::digest;
use crate::shape::{subadditivity_constant, ScaleFunction, ShapeFunction, WeightSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Lower bound on P(A_n) from the positive/negative-part decomposition.
    Theorem1Lower,
    /// Lower bound on P(φ(T_k) <= χ(b_k), k <= n) for a demisubmartingale T.
    RaoLower,
    /// Upper bound on P(max_{m<=k<=n} S_k / b_k > ε).
    HajekRenyiUpper,
    /// Upper bound on P(max_{k<=n} |S_k| / b_k >= ε) from standard deviations.
    AminiUpper,
}

impl BoundKind {
    pub fn is_lower(self) -> bool {
        matches!(self, BoundKind::Theorem1Lower | BoundKind::RaoLower)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub passed: bool,
}

impl HypothesisCheck {
    fn pass(name: &str) -> Self {
        Self {
            name: name.to_string(),
            passed: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_kind: BoundKind,
    pub value: f64,
    pub raw_value: f64,
    pub leading: f64,
    pub coefficient: f64,
    pub terms: Vec<f64>,
    pub hypotheses_checked: Vec<HypothesisCheck>,
    pub well_defined: bool,
    pub informative: bool,
    pub event: EventKey,
    pub event_digest: String,
    pub inputs_digest: String,
}

impl BoundReport {
    fn assemble(
        bound_kind: BoundKind,
        leading: f64,
        coefficient: f64,
        terms: Vec<f64>,
        hypotheses_checked: Vec<HypothesisCheck>,
        event: EventKey,
        inputs: impl Serialize,
    ) -> Self {
        let raw_value = leading + coefficient * compensated_sum(terms.iter().copied());
        let informative = if bound_kind.is_lower() {
            raw_value > 0.0
        } else {
            raw_value < 1.0
        };
        let event_digest = event.digest();
        let inputs_digest = digest(&(bound_kind, &event, &inputs));
        Self {
            bound_kind,
            value: raw_value.clamp(0.0, 1.0),
            raw_value,
            leading,
            coefficient,
            terms,
            hypotheses_checked,
            well_defined: raw_value.is_finite(),
            informative,
            event,
            event_digest,
            inputs_digest,
        }
    }

    /// Attach the increment family the bound describes.
    pub fn for_sequence(mut self, family: Family) -> Self {
        self.event.sequence = Some(family);
        self.event_digest = self.event.digest();
        self.inputs_digest = digest(&(self.inputs_digest.as_str(), &self.event));
        self
    }

    /// `leading + coefficient * Σ terms`, recomputed from the stored terms.
    pub fn recompute_raw(&self) -> f64 {
        self.leading + self.coefficient * compensated_sum(self.terms.iter().copied())
    }
}

fn check_finite(name: &str, values: &[f64]) -> Result<()> {
    let bad: Vec<usize> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_finite())
        .map(|(i, _)| i + 1)
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::HypothesisViolation {
            hypothesis: format!("{name} finite"),
            indices: bad,
        })
    }
}

fn check_nondecreasing(name: &str, values: &[f64]) -> Result<()> {
    let mut bad = Vec::new();
    let mut prev = 0.0;
    for (i, &v) in values.iter().enumerate() {
        if v < prev || v < 0.0 {
            bad.push(i + 1);
        }
        prev = v;
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::HypothesisViolation {
            hypothesis: format!("{name} nonnegative and nondecreasing"),
            indices: bad,
        })
    }
}

fn chi_values(chi: &ScaleFunction, b: &[f64]) -> Result<Vec<f64>> {
    chi.validate()?;
    b.iter().map(|&bk| chi.eval(bk)).collect()
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("epsilon", format!("need epsilon > 0, got {epsilon}")))
    }
}

/// P(A_n) >= 1 - 2K Σ_k [ΔE φ(u_k) + ΔE φ(v_k)] / χ(b_k).
pub fn bound_theorem1(
    phi: &ShapeFunction,
    chi: &ScaleFunction,
    w: &WeightSequence,
    mp: &MomentProfile,
) -> Result<BoundReport> {
    let n = mp.n;
    let certificate = subadditivity_constant(phi)?;
    let b = w.materialize(n)?;
    let chi_b = chi_values(chi, &b)?;
    if let Some(diag) = &mp.integrability {
        if diag.non_integrable {
            return Err(Error::NonIntegrable {
                detail: diag.describe(),
            });
        }
    }
    if mp.e_phi_u.len() != n || mp.e_phi_v.len() != n {
        return Err(Error::Config(format!(
            "moment profile length mismatch: n = {n}, e_phi_u = {}, e_phi_v = {}",
            mp.e_phi_u.len(),
            mp.e_phi_v.len()
        )));
    }
    check_finite("E[phi(u_k)]", &mp.e_phi_u)?;
    check_finite("E[phi(v_k)]", &mp.e_phi_v)?;
    check_nondecreasing("E[phi(u_k)]", &mp.e_phi_u)?;
    check_nondecreasing("E[phi(v_k)]", &mp.e_phi_v)?;

    let mut prev = 0.0;
    let terms: Vec<f64> = (0..n)
        .map(|k| {
            let cur = mp.e_phi_u[k] + mp.e_phi_v[k];
            let t = (cur - prev) / chi_b[k];
            prev = cur;
            t
        })
        .collect();
    let hypotheses = vec![
        HypothesisCheck::pass("phi nonnegative nondecreasing convex with phi(0) = 0"),
        HypothesisCheck {
            name: format!("phi(x+y) <= K[phi(x)+phi(y)] with K = {}", certificate.k),
            passed: certificate.checked_grid_max_ratio <= certificate.k + 1e-9,
        },
        HypothesisCheck::pass("chi positive nondecreasing"),
        HypothesisCheck::pass("0 = b_0 < b_1 <= ... <= b_n"),
        HypothesisCheck::pass("moments finite (right member well-defined)"),
        HypothesisCheck::pass("E[phi(u_k)], E[phi(v_k)] nondecreasing"),
    ];
    let event = EventKey::new(mp.sequence, Event::all_within(*phi, *chi, w.clone(), n));
    Ok(BoundReport::assemble(
        BoundKind::Theorem1Lower,
        1.0,
        -2.0 * certificate.k,
        terms,
        hypotheses,
        event,
        (&mp.e_phi_u, &mp.e_phi_v),
    ))
}

/// P(φ(T_k) <= χ(b_k), k <= n) >= 1 - Σ_k ΔE φ(T_k) / χ(b_k), with
/// E φ(T_0) = 0. `process` records which process `e_phi_t` belongs to.
pub fn bound_rao(
    phi: &ShapeFunction,
    chi: &ScaleFunction,
    w: &WeightSequence,
    e_phi_t: &[f64],
    process: Process,
) -> Result<BoundReport> {
    phi.validate()?;
    let n = e_phi_t.len();
    if n == 0 {
        return Err(Error::Validation {
            index: 1,
            reason: "empty moment sequence".into(),
        });
    }
    let b = w.materialize(n)?;
    let chi_b = chi_values(chi, &b)?;
    check_finite("E[phi(T_k)]", e_phi_t)?;
    check_nondecreasing("E[phi(T_k)]", e_phi_t)?;
    let mut prev = 0.0;
    let terms: Vec<f64> = (0..n)
        .map(|k| {
            let t = (e_phi_t[k] - prev) / chi_b[k];
            prev = e_phi_t[k];
            t
        })
        .collect();
    let hypotheses = vec![
        HypothesisCheck::pass("phi nonnegative nondecreasing convex with phi(T_0) = 0"),
        HypothesisCheck::pass("chi positive nondecreasing"),
        HypothesisCheck::pass("0 = b_0 < b_1 <= ... <= b_n"),
        HypothesisCheck::pass("E[phi(T_k)] finite nondecreasing"),
    ];
    let event = EventKey::new(
        None,
        Event::AllWithin {
            process,
            phi: *phi,
            chi: *chi,
            weights: w.clone(),
            n,
        },
    );
    Ok(BoundReport::assemble(
        BoundKind::RaoLower,
        1.0,
        -1.0,
        terms,
        hypotheses,
        event,
        e_phi_t,
    ))
}

/// Classic inequality for independent mean-zero increments:
/// P(max_{m<=k<=n} S_k/b_k > ε) <= ε⁻² Σ_{j>m} E X_j²/b_j² + b_m⁻² Σ_{j<=m} E X_j².
///
/// `Sided::Upper` is the one-sided statement as written. `Sided::Abs` bounds
/// the |S_k| event by applying the inequality to X and -X, doubling the sum.
pub fn bound_hajek_renyi_classic(
    ex2: &[f64],
    w: &WeightSequence,
    m: usize,
    n: usize,
    epsilon: f64,
    sided: Sided,
) -> Result<BoundReport> {
    if m < 1 || m > n {
        return Err(Error::IndexRange { m, n });
    }
    check_epsilon(epsilon)?;
    if ex2.len() < n {
        return Err(Error::Validation {
            index: ex2.len() + 1,
            reason: format!("E[X^2] has {} entries, need {n}", ex2.len()),
        });
    }
    let ex2 = &ex2[..n];
    check_finite("E[X_j^2]", ex2)?;
    if let Some(i) = ex2.iter().position(|&v| v < 0.0) {
        return Err(Error::Validation {
            index: i + 1,
            reason: "second moment must be nonnegative".into(),
        });
    }
    let b = w.materialize(n)?;
    let bm2 = b[m - 1] * b[m - 1];
    let terms: Vec<f64> = (0..n)
        .map(|j| {
            if j < m {
                ex2[j] / bm2
            } else {
                ex2[j] / (epsilon * epsilon * b[j] * b[j])
            }
        })
        .collect();
    let coefficient = match sided {
        Sided::Upper => 1.0,
        Sided::Abs => 2.0,
    };
    let hypotheses = vec![
        HypothesisCheck::pass("independent mean-zero increments (caller-asserted)"),
        HypothesisCheck::pass("b_k positive nondecreasing"),
        HypothesisCheck::pass("1 <= m <= n"),
    ];
    let event = EventKey::new(
        None,
        Event::MaxExceeds(MaxEvent {
            weights: w.clone(),
            epsilon,
            m,
            n,
            sided,
            inclusive: false,
        }),
    );
    Ok(BoundReport::assemble(
        BoundKind::HajekRenyiUpper,
        0.0,
        coefficient,
        terms,
        hypotheses,
        event,
        ex2,
    ))
}

/// P(max_{k<=n} |S_k|/b_k >= ε) <= (8/ε²) Σ σ_k²/b_k² + 2 Σ_{k>=2} σ_k Σ_{i<k} σ_i / b_k².
pub fn bound_amini(sigma: &[f64], w: &WeightSequence, n: usize, epsilon: f64) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::IndexRange { m: 1, n });
    }
    check_epsilon(epsilon)?;
    if sigma.len() < n {
        return Err(Error::Validation {
            index: sigma.len() + 1,
            reason: format!("sigma has {} entries, need {n}", sigma.len()),
        });
    }
    let sigma = &sigma[..n];
    check_finite("sigma_k", sigma)?;
    if let Some(i) = sigma.iter().position(|&s| s < 0.0) {
        return Err(Error::Validation {
            index: i + 1,
            reason: "standard deviation must be nonnegative".into(),
        });
    }
    let b = w.materialize(n)?;
    let mut running = 0.0;
    let terms: Vec<f64> = (0..n)
        .map(|k| {
            let b2 = b[k] * b[k];
            let t = 8.0 * sigma[k] * sigma[k] / (epsilon * epsilon * b2) + 2.0 * sigma[k] * running / b2;
            running += sigma[k];
            t
        })
        .collect();
    let hypotheses = vec![
        HypothesisCheck::pass("mean-zero increments with finite variance (caller-asserted)"),
        HypothesisCheck::pass("b_k positive nondecreasing"),
    ];
    let event = EventKey::new(
        None,
        Event::MaxExceeds(MaxEvent {
            weights: w.clone(),
            epsilon,
            m: 1,
            n,
            sided: Sided::Abs,
            inclusive: true,
        }),
    );
    Ok(BoundReport::assemble(
        BoundKind::AminiUpper,
        0.0,
        1.0,
        terms,
        hypotheses,
        event,
        sigma,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rademacher_linear_profile(n: usize) -> MomentProfile {
        let half: Vec<f64> = (1..=n).map(|k| k as f64 / 2.0).collect();
        MomentProfile::analytic(None, half.clone(), half, None, None)
    }

    #[test]
    fn decomposition_bound_rademacher_n2() {
        let r = bound_theorem1(
            &ShapeFunction::AbsPower { nu: 1.0 },
            &ScaleFunction::Linear { epsilon: 10.0 },
            &WeightSequence::Power { beta: 1.0 },
            &rademacher_linear_profile(2),
        )
        .unwrap();
        // oracle: 1 - 2 * 1 * ((1/2 + 1/2)/10 + (1/2 + 1/2)/20)
        let oracle = 1.0 - 2.0 * (1.0 / 10.0 + 1.0 / 20.0);
        assert!((r.raw_value - oracle).abs() < 1e-15);
        assert!((r.value - 0.7).abs() < 1e-12);
        assert!(r.informative && r.well_defined);
    }

    #[test]
    fn decomposition_bound_clamps_when_vacuous() {
        let r = bound_theorem1(
            &ShapeFunction::AbsPower { nu: 1.0 },
            &ScaleFunction::Linear { epsilon: 0.5 },
            &WeightSequence::Power { beta: 1.0 },
            &rademacher_linear_profile(4),
        )
        .unwrap();
        assert!(r.raw_value <= 0.0);
        assert_eq!(r.value, 0.0);
        assert!(!r.informative);
    }

    #[test]
    fn decomposition_bound_zero_sequence() {
        let mp = MomentProfile::analytic(None, vec![0.0; 5], vec![0.0; 5], None, None);
        let r = bound_theorem1(
            &ShapeFunction::AbsPower { nu: 2.0 },
            &ScaleFunction::Linear { epsilon: 1.0 },
            &WeightSequence::Log,
            &mp,
        )
        .unwrap();
        assert_eq!(r.raw_value, 1.0);
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn decomposition_bound_rejects_bad_profiles() {
        let phi = ShapeFunction::AbsPower { nu: 1.0 };
        let chi = ScaleFunction::Linear { epsilon: 1.0 };
        let w = WeightSequence::Power { beta: 1.0 };
        let dec = MomentProfile::analytic(None, vec![1.0, 0.5, 2.0], vec![0.0; 3], None, None);
        match bound_theorem1(&phi, &chi, &w, &dec) {
            Err(Error::HypothesisViolation { indices, .. }) => assert_eq!(indices, vec![2]),
            other => panic!("{other:?}"),
        }
        let inf = MomentProfile::analytic(None, vec![1.0, f64::INFINITY], vec![0.0; 2], None, None);
        assert!(matches!(
            bound_theorem1(&phi, &chi, &w, &inf),
            Err(Error::HypothesisViolation { .. })
        ));
    }

    #[test]
    fn rao_examples() {
        let phi = ShapeFunction::AbsPower { nu: 1.0 };
        let chi = ScaleFunction::Linear { epsilon: 10.0 };
        let w = WeightSequence::Power { beta: 1.0 };
        let r = bound_rao(&phi, &chi, &w, &[0.5, 1.0], Process::U).unwrap();
        // independent scalar recomputation
        let oracle = 1.0 - (0.5 - 0.0) / (10.0 * 1.0) - (1.0 - 0.5) / (10.0 * 2.0);
        assert!((r.raw_value - oracle).abs() < 1e-15);
        assert!((r.value - 0.925).abs() < 1e-12);

        assert_eq!(bound_rao(&phi, &chi, &w, &[0.0; 3], Process::U).unwrap().value, 1.0);
        let c = 3.0;
        let r = bound_rao(&phi, &chi, &w, &[c, c, c], Process::U).unwrap();
        assert!((r.raw_value - (1.0 - c / 10.0)).abs() < 1e-15);
        assert!(bound_rao(&phi, &chi, &w, &[1.0, 0.5], Process::U).is_err());
    }

    #[test]
    fn hajek_renyi_examples() {
        let w = WeightSequence::Power { beta: 1.0 };
        let r = bound_hajek_renyi_classic(&[1.0; 3], &w, 1, 3, 2.0, Sided::Upper).unwrap();
        let oracle = (1.0 / 4.0) * (1.0 / 4.0 + 1.0 / 9.0) + 1.0;
        assert!((r.raw_value - oracle).abs() < 1e-15);
        assert_eq!(r.value, 1.0);

        let r = bound_hajek_renyi_classic(&[1.0, 2.0, 0.5], &w, 3, 3, 0.1, Sided::Upper).unwrap();
        assert!((r.raw_value - 3.5 / 9.0).abs() < 1e-15);

        assert_eq!(bound_hajek_renyi_classic(&[0.0; 4], &w, 2, 4, 1.0, Sided::Upper).unwrap().value, 0.0);
        assert!(matches!(
            bound_hajek_renyi_classic(&[1.0; 3], &w, 4, 3, 1.0, Sided::Upper),
            Err(Error::IndexRange { .. })
        ));
        assert!(matches!(
            bound_hajek_renyi_classic(&[1.0; 3], &w, 0, 3, 1.0, Sided::Upper),
            Err(Error::IndexRange { .. })
        ));
        let two = bound_hajek_renyi_classic(&[0.1; 3], &w, 1, 3, 2.0, Sided::Abs).unwrap();
        let one = bound_hajek_renyi_classic(&[0.1; 3], &w, 1, 3, 2.0, Sided::Upper).unwrap();
        assert!((two.raw_value - 2.0 * one.raw_value).abs() < 1e-15);
    }

    #[test]
    fn amini_examples() {
        let r = bound_amini(&[1.0], &WeightSequence::Custom { values: vec![1.0] }, 1, 4.0).unwrap();
        assert!((r.value - 0.5).abs() < 1e-15);
        assert_eq!(bound_amini(&[0.0; 3], &WeightSequence::Log, 3, 1.0).unwrap().value, 0.0);
        let r = bound_amini(&[1.0, 1.0], &WeightSequence::Custom { values: vec![1.0, 2.0] }, 2, 4.0).unwrap();
        assert!((r.raw_value - 1.125).abs() < 1e-15);
        assert_eq!(r.value, 1.0);
        assert!(bound_amini(&[1.0, -1.0], &WeightSequence::Log, 2, 1.0).is_err());
    }

    #[test]
    fn decomposition_bound_reduces_to_doubled_single_process_bound() {
        let phi = ShapeFunction::AbsPower { nu: 1.0 };
        let chi = ScaleFunction::Power { epsilon: 3.0, rho: 1.5 };
        let w = WeightSequence::Log;
        let u = vec![0.2, 0.5, 0.9, 1.4, 2.0];
        let mp = MomentProfile::analytic(None, u.clone(), vec![0.0; 5], None, None);
        let t1 = bound_theorem1(&phi, &chi, &w, &mp).unwrap();
        let rao = bound_rao(&phi, &chi, &w, &u, Process::U).unwrap();
        assert!((t1.raw_value - (1.0 - 2.0 * (1.0 - rao.raw_value))).abs() < 1e-12);
    }

    #[test]
    fn bounds_monotone_in_epsilon() {
        let phi = ShapeFunction::AbsPower { nu: 2.0 };
        let w = WeightSequence::Power { beta: 1.0 };
        let e: Vec<f64> = (1..=20).map(|k| k as f64 * 0.3).collect();
        let mp = MomentProfile::analytic(None, e.clone(), e.clone(), None, None);
        let sig = vec![0.7; 20];
        let ex2 = vec![0.49; 20];
        let mut last = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::INFINITY);
        for i in 1..60 {
            let eps = 0.1 * i as f64;
            let chi = ScaleFunction::Linear { epsilon: eps };
            let t1 = bound_theorem1(&phi, &chi, &w, &mp).unwrap().value;
            let rao = bound_rao(&phi, &chi, &w, &e, Process::U).unwrap().value;
            let hr = bound_hajek_renyi_classic(&ex2, &w, 3, 20, eps, Sided::Upper).unwrap().value;
            let am = bound_amini(&sig, &w, 20, eps).unwrap().value;
            assert!(t1 >= last.0 && rao >= last.1 && hr <= last.2 && am <= last.3);
            last = (t1, rao, hr, am);
        }
    }

    #[test]
    fn terms_telescope_to_raw() {
        let w = WeightSequence::Power { beta: 1.5 };
        let r = bound_amini(&[0.3, 1.2, 0.8, 2.0], &w, 4, 0.7).unwrap();
        assert!((r.recompute_raw() - r.raw_value).abs() <= 1e-12 * r.raw_value.abs());
    }

    #[test]
    fn attaching_a_sequence_changes_event_digest() {
        let r = bound_amini(&[1.0], &WeightSequence::Log, 1, 1.0).unwrap();
        let d = r.event_digest.clone();
        let r = r.for_sequence(Family::Rademacher);
        assert_ne!(d, r.event_digest);
        assert_eq!(r.event.sequence, Some(Family::Rademacher));
    }
}
