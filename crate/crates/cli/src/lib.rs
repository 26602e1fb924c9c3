//! Configuration, reports and property suites behind the `lubgap` binary.

pub mod commands;
pub mod config;
pub mod report;
pub mod verify;

pub use config::{ConfigError, Mode, RunConfig};
pub use report::{run_force, Report};
pub use verify::{run_suite, Suite, VerifyReport};
