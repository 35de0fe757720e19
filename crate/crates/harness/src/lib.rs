//! Experiment harness: configs, the parallel runner, CSV records, rank
//! reports and the intrinsic-dimension probe.

pub mod config;
pub mod dim;
pub mod error;
pub mod records;
pub mod report;
pub mod runner;

pub use config::{ExperimentConfig, Optimizer};
pub use error::{HarnessError, Result};
pub use records::{read_records, write_records, Point, RunRecord};
pub use report::{report, Indicator, Report};
pub use runner::run_experiment;
