//! Batch verifier for gamma-matrix Lagrangians: declarative configs in,
//! deterministic JSON or CSV reports out.

pub mod claims;
pub mod config;
pub mod report;
pub mod suites;

pub use config::{parse_config, ConfigError, RunConfig, Suite};
pub use report::{emit_report, CheckRecord, Format, Outcome, Report};
pub use suites::{run_suite, simulate};
