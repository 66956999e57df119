//! The `aec` command-line tool: file formats, configuration and the eight
//! pipelines (`ingest`, `analyze`, `train-text-clf`, `train-image-probe`,
//! `listen`, `rerank`, `eval`, `report`) over [`aec_core`].
//!
//! Every output file starts with a header carrying the tool version and the
//! fully resolved configuration. Outputs depend only on inputs, flags and
//! seed, never on the thread count.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod header;
pub mod io;

pub use cli::run;
pub use error::{CliError, FormatError};
