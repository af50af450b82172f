//! Batch experiments over the `fhwh-core` library: configuration files,
//! experiment drivers and CSV/JSON reports.

pub mod config;
pub mod error;
pub mod report;
pub mod run;

pub use config::{ConfigFile, Experiment, ExperimentConfig, Format};
pub use error::CliError;
pub use report::{ReportFile, Row, RowError};
pub use run::run;
