//! Experiment runner for safe exploration on terrain.
//!
//! The `safemdp` binary has three subcommands:
//!
//! - `explore <config>` runs the configured strategy for every seed and writes
//!   per-seed artifacts (see [`output`]).
//! - `oracle <config>` writes the largest safely explorable sets computed from
//!   the true terrain.
//! - `synth` writes a synthetic elevation grid as ESRI ASCII.
//!
//! Exit status is 2 for configuration errors, 1 for runtime errors and 0
//! otherwise; a safety violation is a result, not an error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod experiment;
pub mod output;

pub use config::{ExperimentConfig, LoadedConfig};
pub use experiment::{oracle_set, Experiment, Metrics, SeedRun};

/// Overrides the output directory of every configuration.
pub const OUTPUT_ENV: &str = "SAFEMDP_OUT";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0:#}")]
    Runtime(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}
