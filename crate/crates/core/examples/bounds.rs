//! The Gaussian and component bounds next to a Monte Carlo estimate.

use gme::mixture::{sample_centers, MixtureConfig};
use gme::oracle::{component_bound, entropy_given_centers, gaussian_bound, McSettings};

fn main() -> gme::Result<()> {
    for mu in [0.05, 0.5, 5.0, 50.0] {
        let config = MixtureConfig::new(2, 4, 1.0, mu)?;
        let centers = sample_centers(&config, 3)?;
        let h = entropy_given_centers(&config, &centers, &McSettings::new(50_000, 1, 3)?)?;
        println!(
            "mu {mu:>5}: mc {:.4} +- {:.4}  gaussian {:.4}  component {:.4}",
            h.value,
            h.stderr,
            gaussian_bound(&config, &centers)?,
            component_bound(&config)?
        );
    }
    Ok(())
}
