//! File formats, instrumentation and batch drivers around `mincluster-core`.

pub mod compare;
pub mod dot;
pub mod error;
pub mod formats;
pub mod pipeline;
pub mod stats;

pub use error::{CliError, CliResult};
pub use mincluster_core as core;
