//! Config-driven experiments: each command reads an [`ExperimentConfig`],
//! runs the library and writes JSON and CSV reports that carry the config
//! digest and master seed.

mod commands;
mod config;

pub use commands::*;
pub use config::*;
