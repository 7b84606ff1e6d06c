//! Command-line front door for the operator gauge toolkit: scenario
//! ingestion, suite orchestration, and report emission.
//!
//! The library half exists so integration tests can drive runs in-process;
//! the `ogt` binary is a thin argument-parsing wrapper over [`suite`].

// Index loops over spacetime axes mirror the tensor notation.
#![allow(clippy::needless_range_loop)]

pub mod checks;
pub mod converge;
pub mod error;
pub mod report;
pub mod residual_map;
pub mod scenario;
pub mod suite;

pub use error::{CliError, Result, EXIT_CAPABILITY, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK};
