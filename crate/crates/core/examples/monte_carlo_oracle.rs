//! Monte Carlo entropy, plain and with control variates, against the series.

use gme::mixture::MixtureConfig;
use gme::oracle::{average_entropy, Estimator, McSettings};
use gme::series_brute::entropy_series;

fn main() -> gme::Result<()> {
    let config = MixtureConfig::new(3, 3, 1.0, 0.1)?;
    let settings = McSettings::new(20_000, 100, 7)?;
    for estimator in [Estimator::Plain, Estimator::ControlVariate] {
        let e = average_entropy(&config, &settings.with_estimator(estimator))?;
        println!("{estimator:?}: {:.5} +- {:.5}", e.value, e.stderr);
    }
    println!("series order 2: {:.5}", entropy_series(&config, 2)?.value);
    Ok(())
}
