//! Library side of the `fockkit` command line: configuration, subcommands
//! and reports.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{run_subcommand, Command, Outcome, RunError};
pub use config::{parse_config, RunConfig};
pub use report::Report;
