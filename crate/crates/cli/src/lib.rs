//! Command-line front end for the `largen` solver: run records, plot data
//! and the table reproduction harness.

pub mod plot;
pub mod record;
pub mod tables;

pub use record::{ErrorRecord, RunRecord};
