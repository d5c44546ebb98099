//! Experiment runner for `driftplate`: TOML configs, JSON/CSV reports,
//! SVG convergence plots, and the `driftplate` command line.

pub mod config;
pub mod converge;
pub mod error;
pub mod oracle;
pub mod output;
pub mod pipeline;
pub mod plot;
pub mod report;

pub use config::ExperimentConfig;
pub use error::{LabError, LabResult, EXIT_CHECK_FAILED, EXIT_ERROR};
pub use report::{RunReport, SCHEMA_VERSION};
