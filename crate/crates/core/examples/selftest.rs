//! The internal consistency checks behind `gme selftest`.

use gme::cli::selftest_checks;

fn main() -> gme::Result<()> {
    for c in selftest_checks(8, 0)? {
        let verdict = if c.pass { "ok" } else { "FAILED" };
        println!(
            "{:<28} {:>10.2e} (tol {:.0e}) {verdict}",
            c.name, c.max_residual, c.tolerance
        );
    }
    Ok(())
}
