//! Draw centers, evaluate the mixture log-density, sample points.

use gme::mixture::{log_density, sample_centers, sample_mixture, MixtureConfig};

fn main() -> gme::Result<()> {
    let config = MixtureConfig::new(2, 3, 1.0, 0.5)?;
    let centers = sample_centers(&config, 42)?;
    for (j, w) in centers.iter().enumerate() {
        println!("center {j}: {w:?}");
    }
    println!("spread trace {:.4}", centers.spread_trace());

    let points = sample_mixture(&config, &centers, 5, 1)?;
    for x in &points {
        println!(
            "x = [{:+.3}, {:+.3}]  ln f(x) = {:.4}",
            x[0],
            x[1],
            log_density(&config, &centers, x)?
        );
    }
    // Far from every center the log-sum-exp form stays finite.
    println!(
        "ln f at 1e3: {:.1}",
        log_density(&config, &centers, &[1e3, 0.0])?
    );
    Ok(())
}
