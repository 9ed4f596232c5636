//! Checks against oracles that do not share code with the analytic routes.

use std::f64::consts::PI;

use gme::mixture::{
    gaussian_entropy_1d, reduce_dimension, sample_centers, CenterSet, MixtureConfig,
};
use gme::oracle::{average_entropy, entropy_given_centers, Estimator, McSettings};
use gme::series_brute::{entropy_series, series_coefficients};
use gme::series_det::{build_p, build_q};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Entropy of `(N(-d/2, 1) + N(d/2, 1))/2` by trapezoid quadrature.
fn pair_entropy(d: f64) -> f64 {
    let a = 0.5 * d.abs();
    let (lo, hi) = (-a - 14.0, a + 14.0);
    let steps = 4000;
    let h = (hi - lo) / steps as f64;
    let f = |x: f64| {
        let u = -(x - a) * (x - a) / 2.0;
        let v = -(x + a) * (x + a) / 2.0;
        let m = u.max(v);
        let lf = m + ((u - m).exp() + (v - m).exp()).ln() - 0.5 * (2.0 * PI).ln() - 2f64.ln();
        -lf.exp() * lf
    };
    let inner: f64 = (1..steps).map(|k| f(lo + k as f64 * h)).sum();
    h * (inner + 0.5 * (f(lo) + f(hi)))
}

/// Average entropy for `n = 1, q = 2, sigma^2 = 1`: the center gap is
/// `N(0, 2 mu)`, integrated by Gauss-Hermite quadrature.
fn pair_average_entropy(mu: f64) -> f64 {
    // 40-point Gauss-Hermite (physicists') nodes via Golub-Welsch.
    let m = 40;
    let mut jac = DMatrix::zeros(m, m);
    for i in 1..m {
        let b = (i as f64 / 2.0).sqrt();
        jac[(i, i - 1)] = b;
        jac[(i - 1, i)] = b;
    }
    let eig = jac.symmetric_eigen();
    let mut total = 0.0;
    for k in 0..m {
        let x = eig.eigenvalues[k];
        let w = PI.sqrt() * eig.eigenvectors[(0, k)].powi(2);
        // d = sqrt(2 var) x with var = 2 mu.
        total += w * pair_entropy((4.0 * mu).sqrt() * x);
    }
    total / PI.sqrt()
}

#[test]
fn quadrature_pins_the_second_order_coefficient() {
    let h0 = gaussian_entropy_1d(1.0);
    let first = 0.25;
    // Remove the known orders 0 and 1, then fit c2 + c3 mu to the rest.
    let mus = [0.01, 0.02, 0.03];
    let c: Vec<f64> = mus
        .iter()
        .map(|&mu| (pair_average_entropy(mu) - h0 - first * mu) / (mu * mu))
        .collect();
    let slope = (c[2] - c[0]) / (mus[2] - mus[0]);
    let c2 = c[1] - slope * mus[1];
    let expect = -series_coefficients(1, 2).unwrap().c2_expect;
    assert!(
        (c2 - expect).abs() < 2e-3,
        "quadrature c2 = {c2}, expected {expect}"
    );
    assert!((expect + 3.0 / 16.0).abs() < 1e-15);
    // The alternative (n/2)(1 - 1/q)(n/q + 1)/(2q) = 3/32 is ruled out.
    assert!((c2 + 3.0 / 32.0).abs() > 0.05, "{c2}");
    let series = entropy_series(&MixtureConfig::new(1, 2, 1.0, 0.02).unwrap(), 2)
        .unwrap()
        .value;
    assert!((series - pair_average_entropy(0.02)).abs() < 4e-5);
}

#[test]
fn gaussian_integral_by_monte_carlo() {
    // E exp(-a^T V a / 2) over standard normal a in R^q equals det(I + V)^(-1/2),
    // i.e. the integral of exp(-a^T (I + V) a / 2) is (2 pi)^(q/2) / det(I + V)^(1/2).
    let (q, mu) = (3, 0.05);
    let p = build_p(q, mu).unwrap();
    let ql = build_q(q, mu, 1).unwrap();
    let v = &p.entries + &ql.entries;
    let det = (DMatrix::identity(q, q) + &v).determinant();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let samples = 400_000;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    let mut a = nalgebra::DVector::zeros(q);
    for _ in 0..samples {
        a.iter_mut().for_each(|x| *x = rng.sample(StandardNormal));
        let y = (-0.5 * a.dot(&(&v * &a))).exp();
        sum += y;
        sum_sq += y * y;
    }
    let mean = sum / samples as f64;
    let stderr = ((sum_sq / samples as f64 - mean * mean) / samples as f64).sqrt();
    let expect = det.powf(-0.5);
    assert!(
        (mean - expect).abs() < 5.0 * stderr,
        "{mean} +- {stderr} vs {expect}"
    );
}

fn random_rotation(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = m.qr();
    let q = qr.q();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| q[(i, j)])
        .collect()
}

#[test]
fn rotation_and_translation_invariance() {
    let c = MixtureConfig::new(3, 4, 1.0, 0.6).unwrap();
    let w = sample_centers(&c, 21).unwrap();
    let s = McSettings::new(200_000, 1, 5).unwrap();
    let base = entropy_given_centers(&c, &w, &s).unwrap();
    let moved = w
        .rotated(&random_rotation(3, 9))
        .translated(&[1.0, -4.0, 2.5]);
    let other =
        entropy_given_centers(&c, &moved, &McSettings::new(200_000, 1, 6).unwrap()).unwrap();
    let tol = 4.0 * (base.stderr.powi(2) + other.stderr.powi(2)).sqrt();
    assert!(
        (base.value - other.value).abs() < tol,
        "{base:?} vs {other:?}"
    );
}

#[test]
fn extra_dimensions_split_off_for_fixed_centers() {
    // Centers of an n = 7 problem lying in the first q = 4 coordinates: the
    // remaining coordinates are pure noise and add (n - q) h_sigma exactly.
    let full = MixtureConfig::new(7, 4, 1.3, 0.4).unwrap();
    let r = reduce_dimension(&full);
    let small = sample_centers(&r.config, 2).unwrap();
    let padded = CenterSet::new(
        small
            .iter()
            .map(|w| {
                w.iter()
                    .copied()
                    .chain(std::iter::repeat_n(0.0, 3))
                    .collect()
            })
            .collect(),
    )
    .unwrap();
    let rotated = padded.rotated(&random_rotation(7, 4));
    let s = McSettings::new(200_000, 1, 8)
        .unwrap()
        .with_estimator(Estimator::ControlVariate);
    let a = entropy_given_centers(&full, &rotated, &s).unwrap();
    let b = entropy_given_centers(&r.config, &small, &s).unwrap();
    let tol = 4.0 * (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
    assert!(
        (a.value - (b.value + r.offset)).abs() < tol,
        "{} vs {} + {}",
        a.value,
        b.value,
        r.offset
    );
}

#[test]
fn series_polynomial_also_tracks_monte_carlo_above_q() {
    // Without any reduction, n h_sigma + (n/2)(1 - 1/q) mu - n(n+q)(q-1)/(4q^2) mu^2
    // follows the n = 7, q = 4 ensemble at small n mu.
    let (n, q, mu) = (7usize, 4usize, 0.02);
    let c = MixtureConfig::new(n, q, 1.0, mu).unwrap();
    let s = McSettings::new(50_000, 200, 12)
        .unwrap()
        .with_estimator(Estimator::ControlVariate);
    let mc = average_entropy(&c, &s).unwrap();
    let (nf, qf) = (n as f64, q as f64);
    let poly = nf * gaussian_entropy_1d(1.0) + 0.5 * nf * (1.0 - 1.0 / qf) * mu
        - nf * (nf + qf) * (qf - 1.0) / (4.0 * qf * qf) * mu * mu;
    let tol = (4.0 * mc.stderr).max(10.0 * nf * mu.powi(3));
    assert!((mc.value - poly).abs() < tol, "{mc:?} vs {poly}");
}

#[test]
fn plain_estimator_is_unbiased_for_a_single_gaussian() {
    let c = MixtureConfig::new(1, 2, 1.0, 0.0).unwrap();
    let w = CenterSet::zeros(2, 1);
    let truth = gaussian_entropy_1d(1.0);
    let runs: Vec<(f64, f64)> = (0..50)
        .map(|seed| {
            let e =
                entropy_given_centers(&c, &w, &McSettings::new(20_000, 1, seed).unwrap()).unwrap();
            (e.value - truth, e.stderr)
        })
        .collect();
    let mean_err = runs.iter().map(|r| r.0).sum::<f64>() / 50.0;
    let mean_se = runs.iter().map(|r| r.1).sum::<f64>() / 50.0;
    assert!(
        mean_err.abs() < 4.0 * mean_se / 50f64.sqrt(),
        "{mean_err} vs {mean_se}"
    );
}

#[test]
fn average_matches_series_at_desk_scale() {
    let c = MixtureConfig::new(3, 3, 1.0, 0.1).unwrap();
    let mc = average_entropy(&c, &McSettings::new(20_000, 100, 3).unwrap()).unwrap();
    let series = entropy_series(&c, 2).unwrap().value;
    let tol = (4.0 * mc.stderr).max(10.0 * 0.1f64.powi(3) * 3.0);
    assert!((mc.value - series).abs() < tol, "{mc:?} vs {series}");
}

#[test]
fn separated_centers_approach_component_bound() {
    let c = MixtureConfig::new(2, 3, 1.0, 0.0).unwrap();
    let w = CenterSet::new(vec![vec![0.0, 0.0], vec![60.0, 0.0], vec![0.0, 60.0]]).unwrap();
    let e = entropy_given_centers(&c, &w, &McSettings::new(100_000, 1, 1).unwrap()).unwrap();
    let bound = gme::oracle::component_bound(&c).unwrap();
    assert!(e.value <= bound + 4.0 * e.stderr);
    assert!((bound - e.value).abs() < 4.0 * e.stderr + 1e-9);
}

#[test]
fn fixed_settings_are_reproducible() {
    let c = MixtureConfig::new(2, 3, 1.0, 0.2).unwrap();
    let s = McSettings::new(5_000, 20, 77).unwrap();
    assert_eq!(
        average_entropy(&c, &s).unwrap(),
        average_entropy(&c, &s).unwrap()
    );
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let three = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    let a = one.install(|| average_entropy(&c, &s).unwrap());
    let b = three.install(|| average_entropy(&c, &s).unwrap());
    assert_eq!(a, b);
}
