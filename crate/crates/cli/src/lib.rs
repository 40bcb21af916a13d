pub mod config;
pub mod experiment;
pub mod report;

pub use config::{ConfigError, ExperimentConfig, Task};
pub use experiment::{run_experiment, RunError, SweepReport};
pub use report::write_report;
