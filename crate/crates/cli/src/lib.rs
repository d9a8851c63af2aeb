//! Command-line front end for the kicked-coupler simulator: layered
//! key=value configuration, scenario presets, CSV/JSON emission, and
//! parameter sweeps.

pub mod config;
pub mod error;
pub mod runner;
pub mod scenario;

pub use config::{ConfigDelta, InitialState, TrackedSpec, CONFIG_KEYS, NUMERIC_KEYS};
pub use error::{CliError, Result};
pub use runner::{run_scenario, run_sweep, RunOutput, Summary, SweepOutput, CSV_HEADER};
pub use scenario::{preset, resolve, Scenario, PRESET_NAMES};
