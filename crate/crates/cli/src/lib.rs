//! Text formats and the `smonkit` command line.

pub mod commands;
pub mod format;
pub mod load;

pub use commands::{run_args, Outcome};
