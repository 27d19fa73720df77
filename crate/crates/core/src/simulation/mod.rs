//! Estimates of the probabilities that bounds constrain, both simulated and
//! exact, plus the checks built on them.

mod demi;
mod exact;
mod interval;
mod montecarlo;
mod slln;
mod verify;

pub use demi::*;
pub use exact::*;
pub use interval::*;
pub use montecarlo::*;
pub use slln::*;
pub use verify::*;
