//! Command-line front end for the `rankone` library.
//!
//! A run is described by a single JSON configuration document (see
//! [`config`]) naming a cut-and-spacer schedule and one command; the result is
//! a JSON or CSV artifact on standard output or in a file. The [`run`] module
//! turns a parsed configuration into an [`Outcome`]; the binary only handles
//! argument parsing and I/O, so every behavior is testable in-process.

pub mod config;
pub mod output;
pub mod run;
pub mod verify;

pub use run::{run, run_document, Outcome};
