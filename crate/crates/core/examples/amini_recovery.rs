//! With φ(x) = x² and χ(b) = εb the general bound covers the second-moment
//! setting; the variance-based bound is printed alongside it.
//!
//! cargo run --release --example amini_recovery

use hrbounds::experiment::{preset, run_verify};

fn main() -> hrbounds::Result<()> {
    let config = preset("amini-recovery")?;
    let report = run_verify(&config, false)?;
    for row in &report.rows {
        println!(
            "eps={:<4} {:<16?} bound={:.4} p_hat={:.4} [{:.4}, {:.4}] {:?}",
            row.epsilon,
            row.bound.bound_kind,
            row.bound.value,
            row.estimate.p_hat,
            row.estimate.ci_low,
            row.estimate.ci_high,
            row.verifications[0].verdict
        );
    }
    println!("{} checks, {} violations", report.checks, report.violations);
    Ok(())
}
