//! Seed-reproducible samplers for the i.i.d. increment families.
//!
//! Every replicate draws from its own ChaCha8 stream: the generator is keyed
//! by `master_seed` and the stream number is `replicate_index`, so replicate
//! streams never overlap and a replicate's draws do not depend on how many
//! workers run or in which order. Independent purposes inside one experiment
//! (moment estimation, event estimation, ...) use [`derive_seed`] to obtain
//! distinct master seeds from a single configured seed.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Increment distribution family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    /// ±1 with probability 1/2 each.
    Rademacher,
    Gaussian { mu: f64, sigma: f64 },
    /// `Exp(lambda) - 1/lambda`.
    CenteredExponential { lambda: f64 },
    /// Stable law S(alpha, beta, scale; location 0) in the S1 parameterization.
    AlphaStable { alpha: f64, beta: f64, scale: f64 },
    PointMass { c: f64 },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dependence {
    #[default]
    Iid,
}

/// Generative description of X_1..X_n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSequenceSpec {
    pub family: Family,
    pub n: usize,
    #[serde(default)]
    pub dependence: Dependence,
}

impl RandomSequenceSpec {
    pub fn iid(family: Family, n: usize) -> Self {
        Self {
            family,
            n,
            dependence: Dependence::Iid,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::domain("n", "sequence length must be positive"));
        }
        self.family.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub replicate_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, replicate_index: u64) -> Self {
        Self {
            master_seed,
            replicate_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.replicate_index);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child master seed for a named purpose: `splitmix64(master ^ fnv1a(tag))`.
pub fn derive_seed(master_seed: u64, tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix64(master_seed ^ h)
}

fn check_finite(field: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(field, "must be finite"))
    }
}

fn check_stable_params(alpha: f64, beta: f64, scale: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::domain("alpha", format!("need 0 < alpha <= 2, got {alpha}")));
    }
    if !(-1.0..=1.0).contains(&beta) {
        return Err(Error::domain("beta", format!("need -1 <= beta <= 1, got {beta}")));
    }
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain("scale", format!("need scale > 0, got {scale}")));
    }
    Ok(())
}

/// One Chambers–Mallows–Stuck stable variate from two uniforms in (0, 1).
///
/// Pure in its inputs. For `alpha = 2, beta = 0` this reduces to
/// `2 * scale * sqrt(-ln u2) * sin(pi * (u1 - 1/2))`, a centred normal with
/// variance `2 * scale^2`. `alpha = 1` uses the logarithmic branch.
pub fn stable_sample(alpha: f64, beta: f64, scale: f64, u1: f64, u2: f64) -> Result<f64> {
    check_stable_params(alpha, beta, scale)?;
    if !(u1 > 0.0 && u1 < 1.0) {
        return Err(Error::domain("u1", format!("need 0 < u1 < 1, got {u1}")));
    }
    if !(u2 > 0.0 && u2 < 1.0) {
        return Err(Error::domain("u2", format!("need 0 < u2 < 1, got {u2}")));
    }
    let v = PI * (u1 - 0.5);
    let w = -u2.ln();
    if alpha == 1.0 {
        let shifted = FRAC_PI_2 + beta * v;
        let x = (shifted * v.tan() - beta * ((FRAC_PI_2 * w * v.cos()) / shifted).ln()) / FRAC_PI_2;
        return Ok(scale * x + beta * scale * scale.ln() / FRAC_PI_2);
    }
    let x = if beta == 0.0 {
        // B = 0 and S = 1 for the symmetric case
        (alpha * v).sin() / v.cos().powf(1.0 / alpha)
            * ((v - alpha * v).cos() / w).powf((1.0 - alpha) / alpha)
    } else {
        let t = beta * (FRAC_PI_2 * alpha).tan();
        let b = t.atan() / alpha;
        let s = (1.0 + t * t).powf(1.0 / (2.0 * alpha));
        s * (alpha * (v + b)).sin() / v.cos().powf(1.0 / alpha)
            * ((v - alpha * (v + b)).cos() / w).powf((1.0 - alpha) / alpha)
    };
    Ok(scale * x)
}

impl Family {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Rademacher => Ok(()),
            Family::Gaussian { mu, sigma } => {
                check_finite("mu", mu)?;
                if !(sigma > 0.0 && sigma.is_finite()) {
                    return Err(Error::domain("sigma", format!("need sigma > 0, got {sigma}")));
                }
                Ok(())
            }
            Family::CenteredExponential { lambda } => {
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return Err(Error::domain("lambda", format!("need lambda > 0, got {lambda}")));
                }
                Ok(())
            }
            Family::AlphaStable { alpha, beta, scale } => check_stable_params(alpha, beta, scale),
            Family::PointMass { c } => check_finite("c", c),
        }
    }

    /// Draw one variate. Parameters are assumed validated.
    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Family::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            Family::Gaussian { mu, sigma } => {
                let z: f64 = StandardNormal.sample(rng);
                mu + sigma * z
            }
            Family::CenteredExponential { lambda } => {
                let e: f64 = Exp::new(lambda).expect("validated lambda").sample(rng);
                e - 1.0 / lambda
            }
            Family::AlphaStable { alpha, beta, scale } => {
                let u1: f64 = rng.sample(Open01);
                let u2: f64 = rng.sample(Open01);
                stable_sample(alpha, beta, scale, u1, u2).expect("validated stable parameters")
            }
            Family::PointMass { c } => c,
        }
    }

    /// Equally weighted finite support, when the family has one.
    pub fn finite_support(&self) -> Option<Vec<f64>> {
        match *self {
            Family::Rademacher => Some(vec![-1.0, 1.0]),
            Family::PointMass { c } => Some(vec![c]),
            _ => None,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match *self {
            Family::Rademacher => true,
            Family::Gaussian { mu, .. } => mu == 0.0,
            Family::AlphaStable { alpha, beta, .. } => beta == 0.0 || alpha == 2.0,
            Family::PointMass { c } => c == 0.0,
            Family::CenteredExponential { .. } => false,
        }
    }

    /// E[X⁺] and E[X⁻] when known in closed form (`None` when infinite or
    /// not available analytically).
    pub fn part_means(&self) -> Option<(f64, f64)> {
        match *self {
            Family::Rademacher => Some((0.5, 0.5)),
            Family::Gaussian { mu, sigma } => {
                let z = mu / sigma;
                let pdf = (-0.5 * z * z).exp() / (2.0 * PI).sqrt();
                let plus = sigma * pdf + mu * std_normal_cdf(z);
                let minus = sigma * pdf - mu * std_normal_cdf(-z);
                Some((plus, minus))
            }
            Family::CenteredExponential { lambda } => {
                let m = (-1.0f64).exp() / lambda;
                Some((m, m))
            }
            Family::AlphaStable { alpha, .. } if alpha <= 1.0 => None,
            Family::AlphaStable { alpha, scale, .. } if self.is_symmetric() => {
                let abs_mean = 2.0 / PI * statrs::function::gamma::gamma(1.0 - 1.0 / alpha) * scale;
                Some((abs_mean / 2.0, abs_mean / 2.0))
            }
            Family::AlphaStable { .. } => None,
            Family::PointMass { c } => Some((c.max(0.0), (-c).max(0.0))),
        }
    }

    /// E[X²], absent when infinite.
    pub fn second_moment(&self) -> Option<f64> {
        match *self {
            Family::Rademacher => Some(1.0),
            Family::Gaussian { mu, sigma } => Some(mu * mu + sigma * sigma),
            Family::CenteredExponential { lambda } => Some(1.0 / (lambda * lambda)),
            Family::AlphaStable { alpha, scale, .. } if alpha == 2.0 => Some(2.0 * scale * scale),
            Family::AlphaStable { .. } => None,
            Family::PointMass { c } => Some(c * c),
        }
    }

    /// Standard deviation, absent when the variance is infinite.
    pub fn std_dev(&self) -> Option<f64> {
        match *self {
            Family::Rademacher => Some(1.0),
            Family::Gaussian { sigma, .. } => Some(sigma),
            Family::CenteredExponential { lambda } => Some(1.0 / lambda),
            Family::AlphaStable { alpha, scale, .. } if alpha == 2.0 => Some(2f64.sqrt() * scale),
            Family::AlphaStable { .. } => None,
            Family::PointMass { .. } => Some(0.0),
        }
    }

    /// Mean, absent when undefined (stable with alpha <= 1).
    pub fn mean(&self) -> Option<f64> {
        match *self {
            Family::Rademacher | Family::CenteredExponential { .. } => Some(0.0),
            Family::Gaussian { mu, .. } => Some(mu),
            // in the S1 parameterization the location is the mean once alpha > 1
            Family::AlphaStable { alpha, .. } if alpha > 1.0 => Some(0.0),
            Family::AlphaStable { .. } => None,
            Family::PointMass { c } => Some(c),
        }
    }
}

pub(crate) fn std_normal_cdf(z: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-z / std::f64::consts::SQRT_2)
}

/// Draw the whole increment vector for one replicate.
pub fn sample_iid(spec: &RandomSequenceSpec, seed: SeedSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut rng = seed.rng();
    Ok((0..spec.n).map(|_| spec.family.sample_one(&mut rng)).collect())
}
