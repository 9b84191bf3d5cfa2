//! Experiment configuration, sampling, constant fitting, reports and the
//! suites that tie them together.

mod config;
mod fit;
mod report;
mod sampling;
mod suites;

pub use config::{within_budget, ExperimentConfig, GridPoint, OutputFormat, SUITES};
pub use fit::{constant_fit, ls_slope, ConstantFit};
pub use report::{Assertion, CaseRecord, Timing, VerificationReport, SCHEMA_VERSION};
pub use sampling::{dyadic_sizes, name_tag, sample_subsets, task_rng, Sample};
pub use suites::{run_suite, statement};
