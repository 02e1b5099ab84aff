//! Command-line front end for `benford-core`: `benford law`, `gen`,
//! `analyze`, `mantissa` and `reproduce`.

pub mod cli;
pub mod error;
pub mod ingest;
pub mod report;
pub mod reproduce;

pub use cli::run_cli;
pub use error::CliError;
