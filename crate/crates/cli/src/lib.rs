//! Command-line pipelines over the `kronpoly` library: coefficient queries,
//! enumeration, hull construction, sampling and the falsification suites.

pub mod args;
pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use args::Cli;
pub use commands::run;
pub use error::{CliError, CliResult};
