mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;
use genbinom::scalar::set_default_precision;
use genbinom::{Approx, Exact};

use args::{Cli, FamilyArg};

fn main() -> ExitCode {
    let cli = Cli::parse();
    // power-log sequences are transcendental, so they need a float mode
    let precision = cli.common.precision.or(match cli.common.family {
        FamilyArg::PowerLog => Some(genbinom::scalar::default_precision()),
        _ => None,
    });
    let output = match precision {
        Some(bits) => {
            set_default_precision(bits);
            commands::run::<Approx>(&cli)
        }
        None => commands::run::<Exact>(&cli),
    };
    let text = match output {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::FAILURE;
        }
    };
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("error: writing output: {e}");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
