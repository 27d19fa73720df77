//! Convergence heuristics on two textbook series.

use hrbounds::bounds::{slln_series_check, SllnSeriesSpec};
use hrbounds::shape::WeightSequence;

fn main() -> hrbounds::Result<()> {
    let n = 10_000;
    for (name, r) in [("sum 1/k^2", 2.0), ("sum 1/k", 1.0)] {
        let spec = SllnSeriesSpec {
            alpha: vec![1.0; n],
            r,
            weights: WeightSequence::Power { beta: 1.0 },
            c: 1.0,
        };
        let rep = slln_series_check(&spec, n, n / 10)?;
        println!("{name:<10} partial sum {:.6}  verdict {:?}", rep.partial_sum, rep.verdict);
    }
    println!("pi^2/6 = {:.6}", std::f64::consts::PI.powi(2) / 6.0);
    Ok(())
}
