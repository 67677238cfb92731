//! Command-line front end for `divdom`: JSON and CSV I/O around the exact
//! dominance tests and certificate constructions, plus a law-of-large-numbers
//! demonstration.
//!
//! Exit codes: 0 when the relation holds or the command succeeded, 1 when
//! the relation fails (with a reason), 2 on input or usage errors.

// core errors carry exact rationals for diagnostics
#![allow(clippy::result_large_err)]

pub mod commands;
pub mod demo;
pub mod error;
pub mod io;

pub use commands::{run, Cli, Command, Outcome, Relation};
pub use error::CliError;
