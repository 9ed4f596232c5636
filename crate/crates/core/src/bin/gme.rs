use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use gme::cli::{run, Cli, RunSpec, EXIT_USAGE};

fn configure_threads() {
    let Ok(value) = std::env::var("GME_THREADS") else {
        return;
    };
    match value.parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
            {
                log::warn!("could not set thread count: {e}");
            }
        }
        _ => log::warn!("ignoring GME_THREADS={value:?}; expected a positive integer"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    configure_threads();
    let spec = match RunSpec::from_cli(Cli::parse()) {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let outcome = run(&spec);
    if let Some(msg) = &outcome.message {
        eprintln!("{msg}");
    }
    let written = match &spec.out {
        Some(path) => std::fs::write(path, &outcome.report),
        None => std::io::stdout().write_all(outcome.report.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    ExitCode::from(outcome.exit_code as u8)
}
