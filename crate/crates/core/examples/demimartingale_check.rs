//! Runs the demimartingale tester on a martingale, a drifting walk and the
//! positive-part process.
//!
//! cargo run --release --example demimartingale_check

use hrbounds::distributions::{Family, RandomSequenceSpec};
use hrbounds::sequences::TrajectoryBatch;
use hrbounds::simulation::{demi_check, DemiProcess, TestFamily};

fn main() -> hrbounds::Result<()> {
    let cases = [
        ("gaussian martingale, S", Family::Gaussian { mu: 0.0, sigma: 1.0 }, DemiProcess::S),
        ("drift -0.5, S", Family::Gaussian { mu: -0.5, sigma: 1.0 }, DemiProcess::S),
        ("drift -0.5, u", Family::Gaussian { mu: -0.5, sigma: 1.0 }, DemiProcess::U),
        ("rademacher, v", Family::Rademacher, DemiProcess::V),
    ];
    // A true martingale is still flagged with probability up to 1 - level.
    for (name, family, process) in cases {
        let batch = TrajectoryBatch::generate(&RandomSequenceSpec::iid(family, 6), 10_000, 1)?;
        let rep = demi_check(&batch, process, &TestFamily::default(), 0.99)?;
        println!(
            "{name:<24} passed={:<5} flagged={:>2}/{} at j={:?} negative products={}",
            rep.passed,
            rep.flagged_count,
            rep.pairs.len(),
            rep.flagged_j,
            rep.negative_pointwise_margins
        );
    }
    Ok(())
}
