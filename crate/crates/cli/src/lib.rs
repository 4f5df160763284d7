//! Command-line front end: file formats and the `crane3d` subcommands.
//!
//! Scenarios and parameters are JSON, time series are CSV with 17
//! significant digits. Every output file is written to a temporary file
//! first and renamed into place.
//!
//! Exit codes: 1 bad input or unwritable output, 2 simulation or estimation
//! failure, 3 records missing for a requested estimation step, 4
//! ill-conditioned regression.

pub mod commands;
pub mod csvio;
pub mod data;
pub mod error;
pub mod io;
pub mod schema;

pub use commands::{run, Cli};
pub use error::{CliError, Result};
