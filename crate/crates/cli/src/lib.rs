//! Experiment runner: resolves a flat configuration, runs one command over
//! its parameter grid and renders a CSV table with a provenance header.

pub mod commands;
pub mod config;
pub mod error;
pub mod table;

use std::path::{Path, PathBuf};

pub use commands::{Command, Outcome};
pub use config::Config;
pub use error::CliError;

/// Command defaults, then the config file, then overrides.
pub fn resolve(cmd: Command, file: Option<&Path>, overrides: &Config) -> Result<Config, CliError> {
    let defaults = Config::from_pairs(cmd.defaults().iter().copied())?;
    let from_file = match file {
        Some(p) => Config::parse_text(&std::fs::read_to_string(p)?)?,
        None => Config::default(),
    };
    Ok(defaults.merged(&from_file).merged(overrides))
}

/// Runs the command and returns the rendered table with its summary.
pub fn execute(cmd: Command, config: &Config) -> Result<(String, String), CliError> {
    let Outcome { table, summary } = commands::run(cmd, config)?;
    Ok((table.render(cmd.name(), config), format!("{cmd}: {summary}")))
}

/// Output path from the `out` key, if any.
pub fn out_path(config: &Config) -> Option<PathBuf> {
    config.get("out").filter(|s| !s.is_empty()).map(PathBuf::from)
}
