mod args;
mod commands;
mod error;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Detect(a) => commands::detect(a),
        Command::DetectTemporal(a) => commands::detect_temporal(a),
        Command::Eval(a) => commands::eval(a),
        Command::Gen(a) => commands::gen(a),
        Command::GenTemporal(a) => commands::gen_temporal(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
