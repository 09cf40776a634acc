//! Configuration, scanning, CSV output and fringe fitting for the `eraser`
//! command-line tool.

pub mod checks;
pub mod config;
mod error;
pub mod fit;
pub mod scan;

pub use error::{CliError, Result};
