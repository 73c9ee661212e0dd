use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use harmult_cli::{emit, exit_code, out_path, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    // with no --out the report owns stdout, so progress lines go to stderr
    let outcome = if out_path(&cli).is_some() {
        run(&cli, &mut stdout)
    } else {
        run(&cli, &mut std::io::stderr())
    };
    match outcome {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome.report, out_path(&cli), &mut stdout) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(2);
            }
            let _ = stdout.flush();
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
