//! Draws symmetric and skewed stable samples and compares a few empirical
//! tail probabilities with what the law predicts.
//!
//! cargo run --release --example stable_sampler

use hrbounds::distributions::{sample_iid, Family, RandomSequenceSpec, SeedSpec};

fn tail(xs: &[f64], t: f64) -> f64 {
    xs.iter().filter(|x| x.abs() > t).count() as f64 / xs.len() as f64
}

fn main() -> hrbounds::Result<()> {
    let n = 200_000;
    for (alpha, beta) in [(2.0, 0.0), (1.5, 0.0), (1.0, 0.0), (1.5, 0.8), (0.7, 0.0)] {
        let family = Family::AlphaStable { alpha, beta, scale: 1.0 };
        let xs = sample_iid(&RandomSequenceSpec::iid(family, n), SeedSpec::new(2024, 0))?;
        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        println!(
            "alpha={alpha:<4} beta={beta:<4} median={:>8.4}  P(|X|>1)={:.4}  P(|X|>10)={:.5}  P(|X|>100)={:.6}",
            sorted[n / 2],
            tail(&xs, 1.0),
            tail(&xs, 10.0),
            tail(&xs, 100.0),
        );
    }
    // Cauchy: P(|X| > 1) = 1/2 exactly.
    // Gaussian (alpha = 2, scale 1) has variance 2 in this parameterization.
    Ok(())
}
