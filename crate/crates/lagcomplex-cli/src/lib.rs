//! Command-line front end for the Lagrangian complex kernel: expression
//! files in, deterministic PASS/FAIL reports out.

pub mod commands;
pub mod files;

pub use commands::{run, Cli, Command, InputError, Report};
pub use files::{parse_document, Document, FileError};
