//! Exact probabilities for Rademacher walks by enumeration, next to the
//! Monte Carlo estimate of the same event.
//!
//! cargo run --release --example exact_oracle

use hrbounds::distributions::{Family, RandomSequenceSpec};
use hrbounds::event::{Event, MaxEvent, Sided};
use hrbounds::shape::{ScaleFunction, ShapeFunction, WeightSequence};
use hrbounds::simulation::{enumerate_exact, estimate_event, DEFAULT_LEVEL};

fn main() -> hrbounds::Result<()> {
    let events = [
        Event::MaxExceeds(MaxEvent {
            weights: WeightSequence::Power { beta: 0.0 },
            epsilon: 3.0,
            m: 1,
            n: 3,
            sided: Sided::Abs,
            inclusive: true,
        }),
        Event::all_within(
            ShapeFunction::AbsPower { nu: 2.0 },
            ScaleFunction::Linear { epsilon: 2.0 },
            WeightSequence::Power { beta: 1.0 },
            12,
        ),
        Event::MaxExceeds(MaxEvent {
            weights: WeightSequence::Power { beta: 0.5 },
            epsilon: 1.5,
            m: 4,
            n: 16,
            sided: Sided::Upper,
            inclusive: false,
        }),
    ];
    for (i, event) in events.iter().enumerate() {
        let exact = enumerate_exact(&Family::Rademacher, event)?;
        let spec = RandomSequenceSpec::iid(Family::Rademacher, event.n());
        let mc = estimate_event(&spec, event, 100_000, 7, DEFAULT_LEVEL)?;
        println!(
            "event {i}: exact {}/{} = {:.6}   monte carlo {:.6} [{:.6}, {:.6}]",
            exact.favorable, exact.total, exact.probability, mc.p_hat, mc.ci_low, mc.ci_high
        );
    }
    Ok(())
}
