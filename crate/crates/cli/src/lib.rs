//! Configuration handling and scenario presets for the `becprobe` binary.

pub mod config;
pub mod scenario;

pub use config::{ParseError, RunConfig};
pub use scenario::{run_scenario, write_series, ScenarioId};
