//! `qw` — command-line front end for the coined quantum walk simulator.
//!
//! Every subcommand resolves to a serializable `RunConfig`; identical
//! configs (including seeds) produce byte-identical output files.  All
//! angle flags are given in units of π.

mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use config::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match config::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
