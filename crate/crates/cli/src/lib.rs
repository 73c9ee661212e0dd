//! Command-line front end: argument parsing, the commands, and the selftest.

pub mod args;
pub mod commands;
pub mod selftest;

use std::io::Write;
use std::path::Path;

use harmult_core::report::to_json_string;
use harmult_core::{Report, Result};

pub use args::{Cli, Command};
pub use commands::{exit_code, Outcome};

/// Runs a parsed command line. Selftest progress lines go to `log`.
pub fn run(cli: &Cli, log: &mut dyn Write) -> Result<Outcome> {
    match &cli.command {
        Command::Norm(a) => commands::cmd_norm(a),
        Command::Kernel(a) => commands::cmd_kernel(a),
        Command::Lemma(a) => commands::cmd_lemma(a),
        Command::MultCheck(a) => commands::cmd_mult_check(a),
        Command::Selftest(a) => {
            let (all, report) = selftest::run_selftest(&a.common, log)?;
            Ok(Outcome {
                code: if all { commands::EXIT_OK } else { commands::EXIT_DISAGREEMENT },
                report,
            })
        }
    }
}

/// The `--out` path of a command line, if any.
pub fn out_path(cli: &Cli) -> Option<&Path> {
    let common = match &cli.command {
        Command::Norm(a) => &a.common,
        Command::Kernel(a) => &a.common,
        Command::Lemma(a) => &a.common,
        Command::MultCheck(a) => &a.common,
        Command::Selftest(a) => &a.common,
    };
    common.out.as_deref()
}

/// Writes the report to `path`, or to `stdout` when there is none.
pub fn emit(report: &Report, path: Option<&Path>, stdout: &mut dyn Write) -> std::io::Result<()> {
    let text = to_json_string(report);
    match path {
        Some(p) => std::fs::write(p, text),
        None => stdout.write_all(text.as_bytes()),
    }
}
