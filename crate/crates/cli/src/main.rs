//! `graphmono` command-line tool. Exit status: 0 success, 1 the checked
//! property failed (or a refutation was found), 2 usage or input error.

mod args;
mod certificate;
mod commands;
mod output;
mod source;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::commands::Outcome;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("graphmono: thread count must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("graphmono: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(cli.command) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("graphmono: {e:#}");
            ExitCode::from(2)
        }
    }
}
