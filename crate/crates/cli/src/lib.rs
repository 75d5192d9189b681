//! Command-line front end: `eval`, `sweep` and `witness`, plus the JSON
//! state-file format.

pub mod args;
pub mod commands;
pub mod error;
pub mod grid;
pub mod statefile;

pub use args::Cli;
pub use commands::run;
pub use error::CliError;
