//! File formats, configuration and subcommands around [`taumap_core`].

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod io;

pub use config::RunConfig;
pub use error::{CliError, Result};
