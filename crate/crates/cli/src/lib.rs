//! Command-line front end of the pgx toolkit.

pub mod commands;
pub mod config;
pub mod corpus;
pub mod error;
pub mod report;

pub use error::{CliError, CliResult};
