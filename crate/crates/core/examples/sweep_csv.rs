//! Drives the CLI layer in-process and prints a sweep as CSV.

use gme::cli::{run, RunSpec};

fn main() -> gme::Result<()> {
    let spec = RunSpec::parse_from([
        "gme",
        "sweep",
        "--n",
        "2",
        "--q",
        "3",
        "--mu-grid",
        "0:0.2:0.05",
        "--samples",
        "5000",
        "--center-draws",
        "20",
        "--format",
        "csv",
    ])?;
    let out = run(&spec);
    print!("{}", out.report);
    if let Some(msg) = out.message {
        eprintln!("{msg}");
    }
    Ok(())
}
