//! Scenario runner for the boson-bath decay models: configuration parsing,
//! scenario execution and CSV / JSON reports.

pub mod config;
pub mod error;
pub mod report;
pub mod scenario;

pub use config::{ConfigDocument, OutputFormat, Overrides, Scenario, ScenarioConfig};
pub use error::CliError;
pub use report::{Meta, RunReport, Table};
pub use scenario::{run_scenario, run_with_thread_cap};

/// Environment variable capping worker threads; `0` or unset means automatic.
pub const THREADS_ENV: &str = "BOSON_DECAY_THREADS";

pub fn thread_cap_from_env() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::config(format!(
                "{THREADS_ENV} must be a nonnegative integer, got `{v}`"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(CliError::config(format!("{THREADS_ENV}: {e}"))),
    }
}
