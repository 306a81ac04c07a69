//! File formats, report rendering and subcommand dispatch for the
//! `taylor-edges` binary.

pub mod format;
pub mod report;
pub mod run;

pub use run::{execute, Command, Execution, Format, RunConfig, Status, Usage};
