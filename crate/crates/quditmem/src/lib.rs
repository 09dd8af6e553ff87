//! Command-line driver, file formats and parallel sweeps on top of
//! [`quditmem_core`].
//!
//! Every command evaluates into a [`output::Table`] that is written as CSV
//! (default) or JSON. Output is byte-identical across runs and thread counts.

pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod parallel;
pub mod run;

pub use config::{Command, Figure, InputSelector, RunConfig, SpecParams};
pub use error::{CliError, CliResult};
pub use output::{Cell, Format, Table};
pub use run::{execute, run, Outcome};
