//! Library side of the `bmoa-lab` command-line tool.

pub mod commands;
pub mod config;
pub mod report;
pub mod suite;

use anyhow::Result;

use crate::config::RunConfig;
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Admissible,
    Seminorm,
    Alphabeta,
    Bounded,
    Compact,
    Examples,
    Plotdata,
}

/// Validates the config, then runs the command.
pub fn run(command: Command, cfg: &RunConfig) -> Result<Report> {
    let res = cfg.resolve()?;
    match command {
        Command::Admissible => commands::admissible(cfg, &res),
        Command::Seminorm => commands::seminorm_cmd(cfg, &res),
        Command::Alphabeta => commands::alphabeta(cfg, &res),
        Command::Bounded => commands::bounded(cfg, &res),
        Command::Compact => commands::compact(cfg, &res),
        Command::Examples => commands::examples(cfg, &res),
        Command::Plotdata => commands::plotdata(cfg, &res),
    }
}
