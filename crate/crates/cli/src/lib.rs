//! Config-driven experiments: build chains and systems, run the verification
//! probes and the regional-proximality search, and write JSON and CSV output.

pub mod artifacts;
pub mod commands;
pub mod config;

pub use commands::{cmd_build, cmd_report, cmd_rpk, cmd_verify, Outcome, IDENTITY_TOLERANCE};
pub use config::ExperimentConfig;
