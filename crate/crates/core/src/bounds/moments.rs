use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use crate::distributions::{Family, RandomSequenceSpec, SeedSpec};
use crate::error::{Error, Result};
use crate::numerics::{hill_gamma, isotonic_nondecreasing, mean_and_se};
use crate::shape::ShapeFunction;

pub const MIN_REPLICATIONS: usize = 100;

/// One-sided normal quantile used when deciding that the tail index is
/// below one (infinite mean).
const TAIL_Z: f64 = 0.5;

/// Rademacher binomial profiles are computed exactly up to this length.
const EXACT_BINOMIAL_MAX_N: usize = 2_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Analytic,
    Estimated {
        replications: usize,
        se_u: Vec<f64>,
        se_v: Vec<f64>,
        /// Isotonic projection changed at least one entry.
        isotonic_adjusted: bool,
        /// Some entry moved by more than two standard errors.
        isotonic_large_shift: bool,
    },
}

/// Tail diagnostics for estimated profiles.
///
/// `non_integrable` is set when, at some k, the Hill estimate γ of the
/// per-replicate values of φ(u_k) or φ(v_k) satisfies γ(1 - z/√top) > 1,
/// i.e. the tail index 1/γ is confidently below one and the mean is
/// infinite. `cauchy_relative_change` is the largest relative change of the
/// running mean between the first half and the full sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrabilityDiagnostic {
    pub non_integrable: bool,
    pub tail_top: usize,
    pub max_tail_gamma: f64,
    pub worst_index: usize,
    pub worst_part: String,
    pub cauchy_relative_change: f64,
}

impl IntegrabilityDiagnostic {
    pub fn describe(&self) -> String {
        format!(
            "E[phi({}_k)] at k = {}: Hill tail index {:.3} (top {}) indicates an infinite mean; \
             half-vs-full running-mean change {:.3}",
            self.worst_part,
            self.worst_index,
            if self.max_tail_gamma > 0.0 {
                1.0 / self.max_tail_gamma
            } else {
                f64::INFINITY
            },
            self.tail_top,
            self.cauchy_relative_change
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentProfile {
    pub n: usize,
    pub sequence: Option<Family>,
    pub phi: Option<ShapeFunction>,
    pub e_phi_u: Vec<f64>,
    pub e_phi_v: Vec<f64>,
    /// σ_k; `None` when the variance is infinite or unknown.
    pub sigma: Option<Vec<f64>>,
    /// E[X_k²]; `None` when infinite or unknown.
    pub ex2: Option<Vec<f64>>,
    pub provenance: Provenance,
    pub integrability: Option<IntegrabilityDiagnostic>,
}

impl MomentProfile {
    pub fn analytic(
        sequence: Option<Family>,
        e_phi_u: Vec<f64>,
        e_phi_v: Vec<f64>,
        sigma: Option<Vec<f64>>,
        ex2: Option<Vec<f64>>,
    ) -> Self {
        Self {
            n: e_phi_u.len(),
            sequence,
            phi: None,
            e_phi_u,
            e_phi_v,
            sigma,
            ex2,
            provenance: Provenance::Analytic,
            integrability: None,
        }
    }

    pub fn is_integrable(&self) -> bool {
        !self.integrability.as_ref().is_some_and(|d| d.non_integrable)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentSource {
    /// Closed form when available, otherwise Monte Carlo.
    #[default]
    Auto,
    Analytic,
    Estimate,
}

fn second_moment_fields(family: &Family, n: usize) -> (Option<Vec<f64>>, Option<Vec<f64>>) {
    (
        family.std_dev().map(|s| vec![s; n]),
        family.second_moment().map(|m| vec![m; n]),
    )
}

/// E[φ(j)] for j ~ Binomial(k, 1/2), k = 1..n.
fn binomial_half_profile(phi: &ShapeFunction, n: usize) -> Vec<f64> {
    (1..=n as u64)
        .map(|k| {
            let log_half = -(k as f64) * std::f64::consts::LN_2;
            (0..=k)
                .map(|j| (ln_binomial(k, j) + log_half).exp() * phi.eval(j as f64))
                .sum()
        })
        .collect()
}

/// Closed-form profile, or `None` when no closed form is implemented.
pub fn analytic_moment_profile(spec: &RandomSequenceSpec, phi: &ShapeFunction) -> Result<Option<MomentProfile>> {
    spec.validate()?;
    phi.validate()?;
    let n = spec.n;
    let family = spec.family;
    let (e_phi_u, e_phi_v) = match family {
        Family::PointMass { c } => (
            (1..=n).map(|k| phi.eval(k as f64 * c.max(0.0))).collect(),
            (1..=n).map(|k| phi.eval(k as f64 * (-c).max(0.0))).collect(),
        ),
        Family::Rademacher if phi.exponent() == 1.0 => {
            let half: Vec<f64> = (1..=n).map(|k| k as f64 / 2.0).collect();
            (half.clone(), half)
        }
        Family::Rademacher if n <= EXACT_BINOMIAL_MAX_N => {
            // u_k and v_k both count Binomial(k, 1/2) steps
            let p = binomial_half_profile(phi, n);
            (p.clone(), p)
        }
        _ if phi.exponent() == 1.0 => match family.part_means() {
            // φ is the identity on [0, ∞), so E φ(u_k) = k E[X⁺]
            Some((plus, minus)) => (
                (1..=n).map(|k| k as f64 * plus).collect(),
                (1..=n).map(|k| k as f64 * minus).collect(),
            ),
            None => return Ok(None),
        },
        _ => return Ok(None),
    };
    let (sigma, ex2) = second_moment_fields(&family, n);
    let mut mp = MomentProfile::analytic(Some(family), e_phi_u, e_phi_v, sigma, ex2);
    mp.phi = Some(*phi);
    Ok(Some(mp))
}

/// Monte Carlo means of φ(u_k), φ(v_k) over `replications` independent
/// paths drawn from streams `(master_seed, r)`.
pub fn estimate_moment_profile(
    spec: &RandomSequenceSpec,
    phi: &ShapeFunction,
    replications: usize,
    master_seed: u64,
) -> Result<MomentProfile> {
    spec.validate()?;
    phi.validate()?;
    if replications < MIN_REPLICATIONS {
        return Err(Error::Config(format!(
            "moment estimation needs at least {MIN_REPLICATIONS} replications, got {replications}"
        )));
    }
    let n = spec.n;
    let family = spec.family;
    let rows: Vec<(Vec<f64>, Vec<f64>)> = (0..replications as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = SeedSpec::new(master_seed, r).rng();
            let (mut u, mut v) = (0.0, 0.0);
            let mut fu = Vec::with_capacity(n);
            let mut fv = Vec::with_capacity(n);
            for _ in 0..n {
                let x = family.sample_one(&mut rng);
                u += x.max(0.0);
                v += (-x).max(0.0);
                fu.push(phi.eval(u));
                fv.push(phi.eval(v));
            }
            (fu, fv)
        })
        .collect();

    let tail_top = (replications / 50).max(10);
    let half = replications / 2;
    let mut raw_u = Vec::with_capacity(n);
    let mut raw_v = Vec::with_capacity(n);
    let mut se_u = Vec::with_capacity(n);
    let mut se_v = Vec::with_capacity(n);
    let mut diag = IntegrabilityDiagnostic {
        non_integrable: false,
        tail_top,
        max_tail_gamma: 0.0,
        worst_index: 1,
        worst_part: "u".into(),
        cauchy_relative_change: 0.0,
    };
    let mut column = vec![0.0; replications];
    for k in 0..n {
        for (part, raw, se) in [("u", &mut raw_u, &mut se_u), ("v", &mut raw_v, &mut se_v)] {
            for (slot, row) in column.iter_mut().zip(&rows) {
                *slot = if part == "u" { row.0[k] } else { row.1[k] };
            }
            let (mean, stderr) = mean_and_se(&column);
            raw.push(mean);
            se.push(stderr);
            let (half_mean, _) = mean_and_se(&column[..half]);
            if mean != 0.0 && mean.is_finite() {
                let change = (half_mean - mean).abs() / mean.abs();
                diag.cauchy_relative_change = diag.cauchy_relative_change.max(change);
            }
            if let Some(gamma) = hill_gamma(&column, tail_top) {
                if gamma > diag.max_tail_gamma {
                    diag.max_tail_gamma = gamma;
                    diag.worst_index = k + 1;
                    diag.worst_part = part.into();
                }
            }
        }
    }
    diag.non_integrable = diag.max_tail_gamma * (1.0 - TAIL_Z / (tail_top as f64).sqrt()) > 1.0
        || raw_u.iter().chain(&raw_v).any(|m| !m.is_finite());

    let e_phi_u = isotonic_nondecreasing(&raw_u);
    let e_phi_v = isotonic_nondecreasing(&raw_v);
    let shifted = |iso: &[f64], raw: &[f64], se: &[f64]| {
        iso.iter()
            .zip(raw)
            .zip(se)
            .any(|((a, b), s)| (a - b).abs() > 2.0 * s && a != b)
    };
    let isotonic_adjusted = e_phi_u != raw_u || e_phi_v != raw_v;
    let isotonic_large_shift = shifted(&e_phi_u, &raw_u, &se_u) || shifted(&e_phi_v, &raw_v, &se_v);
    let (sigma, ex2) = second_moment_fields(&family, n);
    Ok(MomentProfile {
        n,
        sequence: Some(family),
        phi: Some(*phi),
        e_phi_u,
        e_phi_v,
        sigma,
        ex2,
        provenance: Provenance::Estimated {
            replications,
            se_u,
            se_v,
            isotonic_adjusted,
            isotonic_large_shift,
        },
        integrability: Some(diag),
    })
}

pub fn moment_profile(
    spec: &RandomSequenceSpec,
    phi: &ShapeFunction,
    source: MomentSource,
    replications: usize,
    master_seed: u64,
) -> Result<MomentProfile> {
    match source {
        MomentSource::Analytic => analytic_moment_profile(spec, phi)?.ok_or_else(|| {
            Error::Config(format!(
                "no closed-form moment profile for {:?} with {:?}",
                spec.family, phi
            ))
        }),
        MomentSource::Estimate => estimate_moment_profile(spec, phi, replications, master_seed),
        MomentSource::Auto => match analytic_moment_profile(spec, phi)? {
            Some(mp) => Ok(mp),
            None => estimate_moment_profile(spec, phi, replications, master_seed),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs(nu: f64) -> ShapeFunction {
        ShapeFunction::AbsPower { nu }
    }

    #[test]
    fn point_mass_profiles() {
        let spec = RandomSequenceSpec::iid(Family::PointMass { c: 0.0 }, 4);
        let est = estimate_moment_profile(&spec, &abs(1.0), 100, 1).unwrap();
        assert_eq!(est.e_phi_u, vec![0.0; 4]);
        assert_eq!(est.e_phi_v, vec![0.0; 4]);
        match &est.provenance {
            Provenance::Estimated { se_u, se_v, .. } => {
                assert!(se_u.iter().chain(se_v).all(|&s| s == 0.0));
            }
            other => panic!("{other:?}"),
        }
        assert!(est.is_integrable());
        let an = analytic_moment_profile(&spec, &abs(2.0)).unwrap().unwrap();
        assert_eq!(an.e_phi_u, vec![0.0; 4]);
        assert_eq!(an.sigma, Some(vec![0.0; 4]));
    }

    #[test]
    fn rademacher_estimate_matches_k_over_two() {
        let spec = RandomSequenceSpec::iid(Family::Rademacher, 3);
        let mp = estimate_moment_profile(&spec, &abs(1.0), 100_000, 7).unwrap();
        let Provenance::Estimated { se_u, .. } = &mp.provenance else { panic!() };
        for k in 0..3 {
            let target = (k + 1) as f64 / 2.0;
            assert!((mp.e_phi_u[k] - target).abs() < 4.0 * se_u[k], "k={k}: {}", mp.e_phi_u[k]);
        }
    }

    #[test]
    fn gaussian_first_entry_is_half_normal_mean() {
        let spec = RandomSequenceSpec::iid(Family::Gaussian { mu: 0.0, sigma: 1.0 }, 1);
        let mp = estimate_moment_profile(&spec, &abs(1.0), 100_000, 11).unwrap();
        let Provenance::Estimated { se_u, .. } = &mp.provenance else { panic!() };
        let target = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        assert!((mp.e_phi_u[0] - target).abs() < 4.0 * se_u[0]);
    }

    #[test]
    fn rademacher_binomial_profile_matches_enumeration() {
        let n = 6;
        let phi = abs(2.0);
        let mp = analytic_moment_profile(&RandomSequenceSpec::iid(Family::Rademacher, n), &phi)
            .unwrap()
            .unwrap();
        // brute-force over all 2^k sign patterns
        for k in 1..=n {
            let mut total = 0.0;
            for mask in 0u32..(1 << k) {
                let plus = mask.count_ones() as f64;
                total += phi.eval(plus);
            }
            let exact = total / (1u32 << k) as f64;
            assert!((mp.e_phi_u[k - 1] - exact).abs() < 1e-12);
            assert!((mp.e_phi_v[k - 1] - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn too_few_replications() {
        let spec = RandomSequenceSpec::iid(Family::Rademacher, 3);
        assert!(estimate_moment_profile(&spec, &abs(1.0), 99, 0).is_err());
    }

    #[test]
    fn estimated_profiles_are_monotone() {
        let spec = RandomSequenceSpec::iid(Family::CenteredExponential { lambda: 1.0 }, 30);
        let mp = estimate_moment_profile(&spec, &abs(2.0), 500, 3).unwrap();
        assert!(mp.e_phi_u.windows(2).all(|w| w[0] <= w[1]));
        assert!(mp.e_phi_v.windows(2).all(|w| w[0] <= w[1]));
        assert!(mp.is_integrable());
    }

    #[test]
    fn stable_second_moment_flagged_first_moment_not() {
        let spec = RandomSequenceSpec::iid(Family::AlphaStable { alpha: 1.5, beta: 0.0, scale: 1.0 }, 8);
        for seed in 0..5 {
            let two = estimate_moment_profile(&spec, &abs(2.0), 10_000, seed).unwrap();
            assert!(!two.is_integrable(), "seed {seed}: {:?}", two.integrability);
            let one = estimate_moment_profile(&spec, &abs(1.0), 10_000, seed).unwrap();
            assert!(one.is_integrable(), "seed {seed}: {:?}", one.integrability);
        }
    }

    #[test]
    fn light_tails_not_flagged() {
        for family in [
            Family::Gaussian { mu: 0.0, sigma: 1.0 },
            Family::CenteredExponential { lambda: 1.0 },
            Family::Rademacher,
        ] {
            let spec = RandomSequenceSpec::iid(family, 16);
            for seed in 0..3 {
                let mp = estimate_moment_profile(&spec, &abs(2.0), 10_000, seed).unwrap();
                assert!(mp.is_integrable(), "{family:?}: {:?}", mp.integrability);
            }
        }
    }

    #[test]
    fn auto_prefers_closed_form() {
        let spec = RandomSequenceSpec::iid(Family::Gaussian { mu: 0.0, sigma: 1.0 }, 5);
        let mp = moment_profile(&spec, &abs(1.0), MomentSource::Auto, 200, 0).unwrap();
        assert_eq!(mp.provenance, Provenance::Analytic);
        let mp = moment_profile(&spec, &abs(2.0), MomentSource::Auto, 200, 0).unwrap();
        assert!(matches!(mp.provenance, Provenance::Estimated { .. }));
        assert!(moment_profile(&spec, &abs(2.0), MomentSource::Analytic, 200, 0).is_err());
    }
}
