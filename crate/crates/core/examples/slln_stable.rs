//! Strong law for symmetric 1.5-stable increments normalised by k^1.5: the
//! variance-based results say nothing here, the first-moment bound still
//! gives a convergent series.
//!
//! cargo run --release --example slln_stable

use hrbounds::bounds::{analytic_moment_profile, slln_series_check, SllnSeriesSpec};
use hrbounds::distributions::{Family, RandomSequenceSpec};
use hrbounds::shape::{ScaleFunction, ShapeFunction, WeightSequence};
use hrbounds::simulation::slln_trajectory;

fn main() -> hrbounds::Result<()> {
    let family = Family::AlphaStable { alpha: 1.5, beta: 0.0, scale: 1.0 };
    let n = 100_000;
    let spec = RandomSequenceSpec::iid(family, n);
    let phi = ShapeFunction::AbsPower { nu: 1.0 };
    let chi = ScaleFunction::Linear { epsilon: 1.0 };
    let w = WeightSequence::Power { beta: 1.5 };

    let mp = analytic_moment_profile(&spec, &phi)?.expect("first moment is finite");
    let series = slln_series_check(&SllnSeriesSpec::from_profile(&mp, &chi, w.clone()), n, n / 10)?;
    println!("series: partial sum {:.6}, verdict {:?}", series.partial_sum, series.verdict);

    let rep = slln_trajectory(&spec, &phi, &chi, &w, 200, 99, &[1_000, 10_000, 100_000])?;
    for c in &rep.checkpoints {
        println!(
            "k={:>6}  window max |S_k|/b_k: median {:.3e}  q95 {:.3e}",
            c.k, c.abs_ratio_median, c.abs_ratio_q95
        );
    }
    println!("q95 decreasing: {}", rep.abs_q95_decreasing);
    Ok(())
}
