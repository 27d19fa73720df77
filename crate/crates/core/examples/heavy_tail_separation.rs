use hrbounds::bounds::{bound_theorem1, moment_profile, MomentSource};
use hrbounds::distributions::{Family, RandomSequenceSpec};
use hrbounds::shape::{ScaleFunction, ShapeFunction, WeightSequence};

// For 1.5-stable increments the second moment is infinite, so the ν = 2
// profile is rejected while ν = 1 still yields a bound.
fn main() {
    let spec = RandomSequenceSpec::iid(Family::AlphaStable { alpha: 1.5, beta: 0.0, scale: 1.0 }, 64);
    let chi = ScaleFunction::Linear { epsilon: 5.0 };
    let w = WeightSequence::Power { beta: 1.5 };
    for nu in [1.0, 2.0] {
        let phi = ShapeFunction::AbsPower { nu };
        let result = moment_profile(&spec, &phi, MomentSource::Estimate, 10_000, 3)
            .and_then(|mp| bound_theorem1(&phi, &chi, &w, &mp));
        match result {
            Ok(r) => println!("nu={nu}: bound {:.4}", r.value),
            Err(e) => println!("nu={nu}: {} ({e})", e.kind()),
        }
    }
}
