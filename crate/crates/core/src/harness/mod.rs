//! Scenario-driven execution of the check suite.

mod report;
mod runner;
mod scenario;

pub use report::{emit_report, Report, ReportFormat, Status, TripleResult};
pub use runner::{run_suite, run_suite_with_threads};
pub use scenario::{parse_scenario, Scenario, DEFAULT_SAMPLES, DEFAULT_SEED};
