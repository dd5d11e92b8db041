//! `multifold` command-line interface.

mod args;
mod commands;
mod config;

pub use args::{Cli, Command, CommonArgs, TermKind};
pub use commands::run;
pub use config::{parse_config, Settings};
