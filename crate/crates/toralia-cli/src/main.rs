//! Command-line front end. Exit status: 0 all checks pass, 1 a verification
//! failed, 2 usage or domain error.

mod args;
mod commands;
mod report;

use args::{Cli, Command};
use clap::Parser;
use commands::Outcome;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Catalog(c) | Command::Classify(c) | Command::Constants(c) => c,
        Command::Eval(a) => &a.common,
        Command::Verify(a) => &a.common,
    };
    if let Err(e) = common.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let result = match &cli.command {
        Command::Catalog(c) => commands::catalog_cmd(c),
        Command::Classify(c) => commands::classify_cmd(c),
        Command::Constants(c) => commands::constants_cmd(c),
        Command::Eval(a) => commands::eval_cmd(a),
        Command::Verify(a) => commands::verify_cmd(a),
    };
    let (value, code) = match result {
        Ok(Outcome::Pass(v)) => (v, 0),
        Ok(Outcome::Fail(v)) => (v, 1),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = report::render(&value, common.json);
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code)
}
