//! Experiment harness for the `lowdisc` crate: representation dumps, the α
//! construction, discrepancy tables and an invariant suite.

pub mod commands;
pub mod config;
pub mod error;
pub mod expr;
pub mod verify;

pub use config::{Format, RunConfig, SequenceSpec};
pub use error::CliError;
