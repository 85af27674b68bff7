//! `pathcross` — crossing-path probability experiments from the
//! command line.
//!
//! One subcommand per artifact: `analytic` (closed-form bounds),
//! `table1` (spherical integral against the planar closed form over a
//! parameter grid), `simulate` (seeded walks with reference bands),
//! `first-step` (direct Monte Carlo of the first-step probability),
//! and `integrate` (raw access to the numerical integrals).
//!
//! Exit codes: 0 success, 2 usage error, 3 numeric non-convergence.

use clap::error::ErrorKind;
use clap::Parser;
use std::process::ExitCode;

mod args;
mod commands;
mod error;
mod manifest;
mod output;
mod parallel;

use args::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
