//! Evaluates every closed-form bound for one small Rademacher scenario and
//! prints the per-term breakdown.
//!
//! cargo run --example bound_calculator

use hrbounds::bounds::{
    analytic_moment_profile, bound_amini, bound_hajek_renyi_classic, bound_rao, bound_theorem1, BoundReport,
};
use hrbounds::distributions::{Family, RandomSequenceSpec};
use hrbounds::event::{Process, Sided};
use hrbounds::shape::{ScaleFunction, ShapeFunction, WeightSequence};

fn show(r: &BoundReport) {
    println!(
        "{:<18?} value={:.6} raw={:+.6} informative={} terms={:?}",
        r.bound_kind,
        r.value,
        r.raw_value,
        r.informative,
        r.terms.iter().map(|t| format!("{t:.4}")).collect::<Vec<_>>()
    );
}

fn main() -> hrbounds::Result<()> {
    let n = 6;
    let spec = RandomSequenceSpec::iid(Family::Rademacher, n);
    let phi = ShapeFunction::AbsPower { nu: 2.0 };
    let chi = ScaleFunction::Linear { epsilon: 8.0 };
    let w = WeightSequence::Power { beta: 1.0 };

    let mp = analytic_moment_profile(&spec, &phi)?.expect("Rademacher has a closed form");
    println!("E phi(u_k) = {:?}", mp.e_phi_u);

    show(&bound_theorem1(&phi, &chi, &w, &mp)?);
    show(&bound_rao(&phi, &chi, &w, &mp.e_phi_u, Process::U)?);
    show(&bound_hajek_renyi_classic(&[1.0; 6], &w, 2, n, 1.0, Sided::Abs)?);
    show(&bound_amini(&[1.0; 6], &w, n, 3.0)?);
    Ok(())
}
