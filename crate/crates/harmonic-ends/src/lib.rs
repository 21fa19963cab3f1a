//! File formats, run configuration, sampling and subcommand pipelines for the
//! `harmonic-ends` command-line tool.
//!
//! - [`file`]: JSON end definitions;
//! - [`config`]: run configuration and command-line overrides;
//! - [`sample`]: OBJ meshes and CSV profiles over polar grids;
//! - [`commands`]: the subcommands, returning text for standard output;
//! - [`error`]: errors and exit codes (1 input/config, 2 validation, 3 module).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod file;
pub mod sample;

pub use config::{Overrides, RunConfig};
pub use error::CliError;
pub use file::{load_end, EndDefinitionFile};
