//! Command-line front end: simulation, estimation, validation and summaries
//! over plain-text spike recordings, with CSV and JSON outputs.

pub mod args;
mod commands;
pub mod error;
pub mod io;

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

pub use args::{Cli, Command, Simulate};
pub use error::CliError;
pub use io::{read_input, read_isi_csv, read_spike_times};

pub fn run(cli: Cli) -> Result<(), CliError> {
    let config = cli.config.as_deref();
    match cli.command {
        Command::Simulate(Simulate::Poisson(a)) => commands::simulate_poisson(resolve(a, config)?),
        Command::Simulate(Simulate::Fgm(a)) => commands::simulate_fgm(resolve(a, config)?),
        Command::Simulate(Simulate::Bicomp(a)) => commands::simulate_bicomp(resolve(a, config)?),
        Command::Estimate(a) => commands::estimate(resolve(a, config)?),
        Command::Validate(a) => commands::validate(resolve(a, config)?),
        Command::Summary(a) => commands::summary(resolve(a, config)?),
    }
}

/// Overlays the keys of a JSON config file on the parsed flags.
pub fn resolve<T: Serialize + DeserializeOwned>(flags: T, config: Option<&Path>) -> Result<T, CliError> {
    let Some(path) = config else {
        return Ok(flags);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut overlay: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if let Some(inner) = overlay.get_mut("config") {
        overlay = inner.take();
    }
    let Value::Object(overlay) = overlay else {
        return Err(CliError::Config(format!("{}: expected a JSON object", path.display())));
    };
    let mut base = serde_json::to_value(&flags).map_err(CliError::config)?;
    let fields = base
        .as_object_mut()
        .ok_or_else(|| CliError::Config("flags do not form an object".into()))?;
    for (key, value) in overlay {
        if !fields.contains_key(&key) {
            return Err(CliError::Config(format!("{}: unknown key `{key}`", path.display())));
        }
        fields.insert(key, value);
    }
    serde_json::from_value(base).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}
