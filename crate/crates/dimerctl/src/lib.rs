//! Library half of the `dimerctl` binary: tiling files, SVG rendering, CSV
//! tables and the subcommands.

pub mod cli;
pub mod commands;
pub mod svg;
pub mod table;
pub mod tiling_file;

pub use commands::{run, CliError};
pub use tiling_file::{ParseError, TilingFile};
