//! Acceptance criteria for `gme`.
//!
//! Each criterion is a function returning a one-line summary, `Ok` when it
//! holds and `Err` when it does not. [`CRITERIA`] lists them with their time
//! limits; the `acceptance` test target prints one PASS/FAIL line for each.

use std::time::Duration;

use gme::cli::{moment_z_score, run, RunSpec, DET_MUS, MOMENT_CASES, SPECTRAL_MUS};
use gme::mixture::{gaussian_entropy_1d, sample_centers, MixtureConfig};
use gme::oracle::{
    average_entropy, component_bound, entropy_given_centers, gaussian_bound, Estimator, McSettings,
};
use gme::series_brute::{assembly_residual, entropy_series};
use gme::series_det::{closed_form_max_error, entropy_det, z1, z2};
use gme::spectral::{eigenbasis, identity_suite};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<String, String>;

const Z_CASES: [(usize, usize); 3] = [(2, 3), (4, 4), (3, 6)];

pub fn spectral() -> Check {
    let (mut orth, mut diag, mut ident) = (0f64, 0f64, 0f64);
    for q in 2..=16 {
        for &mu in &SPECTRAL_MUS {
            let d = eigenbasis(q, mu).map_err(|e| e.to_string())?;
            orth = orth.max(d.orthogonality_residual());
            diag = diag.max(d.m_residual());
            ident = ident.max(identity_suite(q, mu).map_err(|e| e.to_string())?);
        }
    }
    let msg =
        format!("orthogonality {orth:.1e}, diagonalization {diag:.1e}, identities {ident:.1e}");
    if orth < 1e-12 && diag < 1e-11 && ident < 1e-10 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

pub fn determinants() -> Check {
    let mut worst = 0f64;
    for q in 3..=10 {
        for mu in DET_MUS {
            worst = worst.max(closed_form_max_error(q, mu, 3).map_err(|e| e.to_string())?);
        }
    }
    let msg = format!("max relative error {worst:.1e}");
    if worst < 1e-11 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

pub fn moments() -> Check {
    // moment_z_score covers every name, with odd moments compared against zero.
    let mut worst = 0f64;
    for (i, &(n, q)) in MOMENT_CASES.iter().enumerate() {
        worst =
            worst.max(moment_z_score(n, q, 1_000_000, 100 + i as u64).map_err(|e| e.to_string())?);
    }
    let msg = format!("max |z| {worst:.2} over {} cases", MOMENT_CASES.len());
    if worst <= 5.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

pub fn assembly() -> Check {
    let mut worst = 0f64;
    for q in 2..=12 {
        for n in 1..=q {
            worst = worst.max(assembly_residual(n, q));
        }
    }
    let msg = format!("max relative residual {worst:.1e}");
    if worst <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

pub fn leading_orders() -> Check {
    let mut ratios = Vec::new();
    for &(n, q) in &Z_CASES {
        let (nf, qf) = (n as f64, q as f64);
        let e1 = |mu: f64| z1(n, q, mu).map(|z| (z / mu + nf / (qf - 1.0)).abs());
        let e2 = |mu: f64| z2(n, q, mu).map(|z| (z / mu - 0.5 * nf / (qf * (qf - 1.0))).abs());
        let r1 = e1(1e-2).map_err(|e| e.to_string())? / e1(5e-3).map_err(|e| e.to_string())?;
        let r2 = e2(1e-2).map_err(|e| e.to_string())? / e2(5e-3).map_err(|e| e.to_string())?;
        ratios.extend([r1, r2]);
    }
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    let msg = format!("halving ratios in [{lo:.3}, {hi:.3}]");
    if lo >= 1.4 && hi <= 2.6 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

pub fn brute_vs_det() -> Check {
    let mut worst = 0f64;
    for &(n, q) in &Z_CASES {
        for mu in [1e-3, 5e-3, 1e-2] {
            let c = MixtureConfig::new(n, q, 1.0, mu).map_err(|e| e.to_string())?;
            let det = entropy_det(&c).map_err(|e| e.to_string())?.value;
            let series = entropy_series(&c, 1).map_err(|e| e.to_string())?.value;
            worst = worst.max((det - series).abs() / (10.0 * n as f64 * mu * mu));
        }
    }
    let msg = format!("max |det - series1| / (10 n mu^2) = {worst:.3}");
    if worst <= 1.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Weighted least squares slope of `ln|r|` against `ln mu`, weights `(r/se)^2`.
fn fit_exponent(mus: &[f64], res: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64, f64)> = mus
        .iter()
        .zip(res)
        .map(|(&mu, &(r, se))| (mu.ln(), r.abs().ln(), (r / se).powi(2)))
        .collect();
    let sw: f64 = pts.iter().map(|p| p.2).sum();
    let mx = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let my = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let sxy: f64 = pts.iter().map(|p| p.2 * (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| p.2 * (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn series_vs_mc() -> Check {
    let mus = [0.05, 0.10, 0.15];
    let settings = McSettings::new(200_000, 400, 7)
        .map_err(|e| e.to_string())?
        .with_estimator(Estimator::ControlVariate);
    let mut res = Vec::new();
    let mut ok = true;
    for &mu in &mus {
        let c = MixtureConfig::new(3, 3, 1.0, mu).map_err(|e| e.to_string())?;
        let mc = average_entropy(&c, &settings).map_err(|e| e.to_string())?;
        let series = entropy_series(&c, 2).map_err(|e| e.to_string())?.value;
        let r = mc.value - series;
        ok &= r.abs() <= (4.0 * mc.stderr).max(10.0 * 3.0 * mu.powi(3));
        res.push((r, mc.stderr));
    }
    let slope = fit_exponent(&mus, &res);
    let listed: Vec<String> = res
        .iter()
        .map(|(r, se)| format!("{r:.2e}+-{se:.1e}"))
        .collect();
    let msg = format!(
        "residuals [{}], fitted exponent {slope:.2}",
        listed.join(", ")
    );
    if ok && (2.0..=4.0).contains(&slope) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

pub fn bounds() -> Check {
    let mut worst_series = f64::NEG_INFINITY;
    for q in 2..=10 {
        let c = MixtureConfig::new(q, q, 1.0, 0.0).map_err(|e| e.to_string())?;
        let bound = component_bound(&c).map_err(|e| e.to_string())?;
        for k in 0..=20 {
            let mu = k as f64 / (20.0 * q as f64);
            let s = entropy_series(&c.with_mu(mu), 2)
                .map_err(|e| e.to_string())?
                .value;
            worst_series = worst_series.max(s - bound);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_z = f64::NEG_INFINITY;
    for case in 0..8u64 {
        let q = rng.random_range(2..=6);
        let n = rng.random_range(1..=4);
        let mu = rng.random_range(0.01..2.0);
        let sigma2 = rng.random_range(0.2..3.0);
        let c = MixtureConfig::new(n, q, sigma2, mu).map_err(|e| e.to_string())?;
        let w = sample_centers(&c, case).map_err(|e| e.to_string())?;
        let s = McSettings::new(50_000, 1, case).map_err(|e| e.to_string())?;
        let e = entropy_given_centers(&c, &w, &s).map_err(|e| e.to_string())?;
        let g = gaussian_bound(&c, &w).map_err(|e| e.to_string())?;
        let k = component_bound(&c).map_err(|e| e.to_string())?;
        worst_z = worst_z.max((e.value - g.min(k)) / e.stderr);
    }
    let msg = format!("series excess {worst_series:.1e}, worst MC excess {worst_z:.2} stderr");
    if worst_series <= 1e-12 && worst_z <= 4.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Fails: the reduction is exact for each fixed center set but not for the
/// ensemble average, where the first-order gap is `(n - q)(1 - 1/q) mu / 2`.
pub fn reduction() -> Check {
    let mu = 0.1;
    let s = McSettings::new(50_000, 200, 9)
        .map_err(|e| e.to_string())?
        .with_estimator(Estimator::ControlVariate);
    let full = average_entropy(
        &MixtureConfig::new(7, 4, 1.0, mu).map_err(|e| e.to_string())?,
        &s,
    )
    .map_err(|e| e.to_string())?;
    let small = average_entropy(
        &MixtureConfig::new(4, 4, 1.0, mu).map_err(|e| e.to_string())?,
        &s,
    )
    .map_err(|e| e.to_string())?;
    let gap = full.value - (small.value + 3.0 * gaussian_entropy_1d(1.0));
    let se = (full.stderr.powi(2) + small.stderr.powi(2)).sqrt();
    // First-order prediction of the gap: (n - q)(1 - 1/q) mu / 2.
    let predicted = 3.0 * 0.75 * mu / 2.0;
    let msg = format!(
        "mu {mu}: gap {gap:.4e} vs 4 stderr {:.1e} (first-order gap {predicted:.4e})",
        4.0 * se
    );
    if gap.abs() <= 4.0 * se {
        Ok(msg)
    } else {
        Err(msg)
    }
}

const SWEEP: [&str; 17] = [
    "gme",
    "sweep",
    "--n",
    "3",
    "--q",
    "3",
    "--mu-grid",
    "0.05:0.15:0.05",
    "--samples",
    "200000",
    "--center-draws",
    "400",
    "--seed",
    "7",
    "--format",
    "csv",
    "--no-timing",
];

fn sweep_csv(threads: usize) -> Result<String, String> {
    let spec = RunSpec::parse_from(SWEEP).map_err(|e| e.to_string())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| e.to_string())?;
    let out = pool.install(|| run(&spec));
    if out.exit_code != 0 {
        return Err(format!(
            "sweep exited with {}: {:?}",
            out.exit_code, out.message
        ));
    }
    Ok(out.report)
}

pub fn determinism() -> Check {
    let a = sweep_csv(4)?;
    let b = sweep_csv(4)?;
    let c = sweep_csv(1)?;
    let msg = format!(
        "{} bytes, repeat equal {}, 1 vs 4 threads equal {}",
        a.len(),
        a == b,
        a == c
    );
    if a == b && a == c {
        Ok(msg)
    } else {
        Err(msg)
    }
}

pub struct Criterion {
    pub title: &'static str,
    pub limit: Duration,
    pub check: fn() -> Check,
}

const fn criterion(title: &'static str, secs: u64, check: fn() -> Check) -> Criterion {
    Criterion {
        title,
        limit: Duration::from_secs(secs),
        check,
    }
}

/// Criteria in order, numbered from 1.
pub const CRITERIA: [Criterion; 10] = [
    criterion("spectral exactness", 1, spectral),
    criterion("determinant closed forms", 5, determinants),
    criterion("moment table", 60, moments),
    criterion("coefficient assembly", 1, assembly),
    criterion("z leading orders", 1, leading_orders),
    criterion("brute vs determinant", 1, brute_vs_det),
    criterion("series vs monte carlo", 300, series_vs_mc),
    criterion("bound ordering", 30, bounds),
    criterion("dimensional reduction", 120, reduction),
    criterion("determinism", 600, determinism),
];

/// Whole-suite time limit.
pub const SUITE_LIMIT: Duration = Duration::from_secs(600);
