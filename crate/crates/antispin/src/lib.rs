//! Command-line front end, seed files and CSV curves for `antispin-core`.

pub mod cli;
pub mod commands;
pub mod curve;
pub mod error;
pub mod seedfile;
pub mod solve;

pub use cli::Cli;
pub use error::{CliError, Status};
pub use seedfile::SeedFile;
