//! File formats, CLI plumbing and the live-reload server around
//! [`sketch2ui_core`].

pub mod error;
pub mod fsio;
pub mod loss;
pub mod pipeline;
pub mod serve;

pub use error::CliError;
pub use pipeline::{run, run_and_write, Mode, PipelineConfig, RunReport};
