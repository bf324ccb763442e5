//! Experiment configuration, run persistence, channel classification and the acceptance suite.

pub mod classify;
pub mod config;
pub mod persist;
pub mod suite;

pub use classify::{classify, parse_descriptor, write_classify, ChannelDescriptor, ClassifyDocument};
pub use config::ExperimentConfig;
pub use persist::{exit_code, run_experiment, runs_root, write_atomic, RunManifest, RunOutcome, RUNS_DIR_ENV};
pub use suite::{criteria, run_suite, Criterion, CriterionOutcome, Status, SuiteOptions, SuiteReport, write_suite};
