//! Batch command line for projection pursuit experiments: CSV ingestion,
//! TOML run configurations, experiment commands and SVG plots.

pub mod config;
pub mod data;
pub mod error;
pub mod run;
pub mod svg;

pub use config::RunConfig;
pub use error::CliError;
pub use run::{run_command, Command};
