//! Command-line pipeline around the `trackscope` library: run
//! configuration, stage orchestration and the output manifest.

pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
