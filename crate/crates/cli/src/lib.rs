//! File formats, drawings and command implementations for the
//! `hyperideal` tool.

pub mod commands;
pub mod document;
pub mod error;
pub mod svg;

pub use error::{CliError, Result};
