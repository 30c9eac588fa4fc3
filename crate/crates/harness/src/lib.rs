//! Experiment harness: presets, multi-seed runner and CSV output.

pub mod config;
pub mod error;
pub mod output;
pub mod runner;

pub use config::{
    Algo, BoundsOverride, Experiment, ExperimentConfig, FeedbackMode, ResolvedConfig,
};
pub use error::HarnessError;
pub use output::{emit_csv, emit_trace, CSV_HEADER};
pub use runner::{run_experiment, run_experiment_outputs, run_single, RunOutput, RunRecord};
