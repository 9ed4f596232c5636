//! Moment table, coefficient assembly and the small-spread series.

use gme::mixture::MixtureConfig;
use gme::series_brute::{entropy_series, moment_mc, series_coefficients, MomentName, MomentTable};

fn main() -> gme::Result<()> {
    let (n, q) = (2, 3);
    let table = MomentTable::closed_form(n, q);
    for name in [MomentName::Aa, MomentName::F, MomentName::J] {
        let mc = moment_mc(name, n, q, 200_000, 5)?;
        println!(
            "{name:>3}: closed {:.5}  mc {:.5} +- {:.5}",
            table[name], mc.mean, mc.stderr
        );
    }

    let c = series_coefficients(n, q)?;
    println!("E[c1] = {:.6}, E[c2] = {:.6}", c.c1_expect, c.c2_expect);

    let config = MixtureConfig::new(3, 3, 1.0, 0.0)?;
    for mu in [0.0, 0.05, 0.1, 0.2] {
        let c = config.with_mu(mu);
        let h: Vec<f64> = (0..=2)
            .map(|k| entropy_series(&c, k).map(|e| e.value))
            .collect::<Result<_, _>>()?;
        println!("mu {mu:.2}: orders 0..2 {h:.6?}");
    }
    Ok(())
}
