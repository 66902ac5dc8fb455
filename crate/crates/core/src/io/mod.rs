//! TOML configuration, CSV ingestion and emission, and the subcommand runner.

pub mod commands;
pub mod config;
pub mod tables;
pub mod units;
