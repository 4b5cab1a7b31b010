//! Experiment runner for the `qthermo` simulation library.
//!
//! The `qthermo` binary exposes four commands that emit figure data as CSV or
//! as a JSON report:
//!
//! | command               | content                                              |
//! |-----------------------|------------------------------------------------------|
//! | `discriminate`        | optimal-observable expectations and separations vs τ |
//! | `free-energy`         | `ΔU`, `ΔS`, `ΔF` trajectories per probe and bath     |
//! | `calibration`         | `τ(φ)` for both baths and `T(p)`                     |
//! | `simulate-experiment` | full optical pipeline with tomography and error bars |
//!
//! Exit codes: 0 success, 2 configuration error, 3 runtime error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;
use std::path::PathBuf;

pub mod commands;
pub mod config;
pub mod table;

pub use commands::{run, Command, CommandOutput};
pub use config::ExperimentConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Everything needed to run one command.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub command: Command,
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub format: Format,
    /// Where to write the JSON report in addition to the main output.
    pub report: Option<PathBuf>,
}

impl Invocation {
    pub fn load_config(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.master_seed = seed;
        }
        Ok(cfg)
    }
}

fn render(output: &CommandOutput, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => Ok(output.table.to_csv_string()?.into_bytes()),
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&output.report())
                .map_err(|e| CliError::Runtime(format!("serializing report: {e}")))?;
            text.push('\n');
            Ok(text.into_bytes())
        }
    }
}

fn write_to(path: Option<&PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    let res = match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| (p.display().to_string(), e)),
        None => std::io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|e| ("stdout".to_string(), e)),
    };
    res.map_err(|(what, e)| CliError::Runtime(format!("writing {what}: {e}")))
}

/// Runs the invocation and writes its outputs; returns the process exit code.
///
/// Rows that failed (non-representable `τ`) are still written, but the exit
/// code is then [`EXIT_RUNTIME`].
pub fn execute(inv: &Invocation) -> Result<i32, CliError> {
    let cfg = inv.load_config()?;
    let output = run(inv.command, &cfg)?;
    if let Some(path) = &inv.report {
        write_to(Some(path), &render(&output, Format::Json)?)?;
    }
    write_to(inv.out.as_ref(), &render(&output, inv.format)?)?;
    if output.row_errors > 0 {
        eprintln!(
            "{}: {} row(s) could not be simulated",
            inv.command.name(),
            output.row_errors
        );
        return Ok(EXIT_RUNTIME);
    }
    Ok(EXIT_OK)
}

// The runner chapter of the guide is compiled here so its snippets run as doctests.
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub mod guide_cli {}
