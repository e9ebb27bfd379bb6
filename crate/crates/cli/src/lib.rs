//! Command-line front end for `warpstab-core`.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::io::Write;

use args::{Cli, Command};
use commands::Status;
use config::{FileConfig, RunConfig};
use error::Result;

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<Status> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Sweep { model, table, t_max, step } => {
            commands::sweep(&RunConfig::resolve(&file, &model)?, table, t_max, step, out)
        }
        Command::Classify { model } => commands::classify_cmd(&RunConfig::resolve(&file, &model)?, out),
        Command::Slice { model, x, h, l_max } => commands::slice_cmd(&RunConfig::resolve(&file, &model)?, x, h, l_max, out),
        Command::Threshold { model, eps, delta, a, h, case } => {
            commands::threshold_cmd(&RunConfig::resolve(&file, &model)?, eps, delta, a, h, case, out)
        }
        Command::Verify { model, suite } => commands::verify_cmd(&RunConfig::resolve(&file, &model)?, suite, out),
        Command::Embed { model } => commands::embed_cmd(&RunConfig::resolve(&file, &model)?, out),
    }
}
