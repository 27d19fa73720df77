//! Executable Hájek–Rényi type maximal inequalities.
//!
//! Bounds are evaluated from moment data and then checked against Monte Carlo
//! estimates or exact enumeration of the probabilities they constrain. The
//! same machinery tests the demimartingale property on simulated paths and
//! runs strong-law demonstrations, including stable increments whose second
//! moments are infinite.
//!
//! Modules, bottom-up:
//!
//! * [`distributions`]: seed-reproducible increment samplers (Chambers–Mallows–Stuck for stable laws).
//! * [`shape`]: shape function φ, scale function χ, weights b_k.
//! * [`sequences`]: partial sums and the u/v positive/negative-part decomposition.
//! * [`bounds`]: closed-form bounds, moment profiles, the series check.
//! * [`simulation`]: Monte Carlo and exact estimates, verification, demimartingale checks, strong-law trajectories.
//! * [`experiment`]: config-driven commands behind the `hrbounds` binary.

pub mod bounds;
pub mod distributions;
pub mod error;
pub mod event;
pub mod experiment;
pub mod numerics;
pub mod report;
pub mod sequences;
pub mod shape;
pub mod simulation;

pub use error::{Error, Result};
