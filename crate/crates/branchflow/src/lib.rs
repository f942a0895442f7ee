//! File formats, reports and the `branchflow` command line tool on top of
//! [`branchflow_core`].

pub mod cli;
pub mod numeric;
pub mod report;
pub mod schema;

pub use branchflow_core as core;
