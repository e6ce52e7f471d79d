//! Configuration, scenarios and CSV output for the `fuelrod` command.

pub mod analysis;
pub mod config;
pub mod csv;
pub mod error;
pub mod scenarios;

pub use config::Config;
pub use error::{CliError, CliResult};
