//! Configuration files, artifact writers and the command-line front end for
//! `rodeconv` convergence experiments.

pub mod artifacts;
pub mod config;
pub mod error;

pub use artifacts::{dump_noise, run, RunOutcome};
pub use config::{parse_config, print_config, ExperimentConfig, OutputFormat, OutputSpec};
pub use error::{CliError, Issue};

/// Environment variable naming the output directory when the config has none.
pub const OUTPUT_DIR_ENV: &str = "RODECONV_OUTPUT_DIR";

pub const DEFAULT_OUTPUT_DIR: &str = "rodeconv-out";
