//! Library side of the `tiltbound` command: argument types, the commands
//! themselves and CSV output. `main.rs` only parses and dispatches.

pub mod commands;
pub mod config;
pub mod csv;
pub mod figures;

use std::path::Path;

use config::{Cli, CliError, Command};

pub use commands::{run_bound, run_capacity, run_code_check, run_reliability};
pub use figures::run_figure;

pub fn run(cli: &Cli) -> Result<(csv::Table, Option<&Path>), CliError> {
    Ok(match &cli.command {
        Command::Bound(a) => (run_bound(a)?, a.out.as_deref()),
        Command::Figure(a) => (run_figure(a.id)?, a.out.as_deref()),
        Command::Reliability(a) => (run_reliability(a)?, a.out.as_deref()),
        Command::CodeCheck(a) => (run_code_check(a)?, a.out.as_deref()),
        Command::Capacity(a) => (run_capacity(a)?, a.out.as_deref()),
    })
}

/// Writes to `out`, or to stdout when no path is given.
pub fn emit(table: &csv::Table, out: Option<&Path>) -> Result<(), CliError> {
    let text = table.render();
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
