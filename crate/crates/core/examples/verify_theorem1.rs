//! Checks the lower bound on P(φ(S_k) <= χ(b_k) for all k <= n) against
//! simulation for several increment laws.
//!
//! cargo run --release --example verify_theorem1

use hrbounds::bounds::{bound_theorem1, moment_profile, MomentSource};
use hrbounds::distributions::{Family, RandomSequenceSpec};
use hrbounds::shape::{ScaleFunction, ShapeFunction, WeightSequence};
use hrbounds::simulation::{estimate_event, verify_bound, Evidence, DEFAULT_LEVEL};

fn main() -> hrbounds::Result<()> {
    let families = [
        Family::Rademacher,
        Family::Gaussian { mu: 0.0, sigma: 1.0 },
        Family::CenteredExponential { lambda: 1.0 },
        Family::AlphaStable { alpha: 1.5, beta: 0.0, scale: 1.0 },
    ];
    let phi = ShapeFunction::AbsPower { nu: 1.0 };
    let w = WeightSequence::Power { beta: 1.5 };
    for family in families {
        let spec = RandomSequenceSpec::iid(family, 32);
        let mp = moment_profile(&spec, &phi, MomentSource::Auto, 10_000, 11)?;
        for eps in [2.0, 5.0, 10.0] {
            let chi = ScaleFunction::Linear { epsilon: eps };
            let bound = bound_theorem1(&phi, &chi, &w, &mp)?.for_sequence(family);
            let est = estimate_event(&spec, &bound.event.event, 10_000, 12, DEFAULT_LEVEL)?;
            let v = verify_bound(Evidence::Estimate(&est), &bound)?;
            println!(
                "{:<60} eps={eps:<4} bound={:.4} p_hat={:.4} -> {:?}",
                format!("{family:?}"),
                bound.value,
                est.p_hat,
                v.verdict
            );
        }
    }
    Ok(())
}
