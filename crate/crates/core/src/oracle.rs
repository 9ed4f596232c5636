//! Monte Carlo ground truth and closed-form upper bounds.
//!
//! The plug-in estimator averages `-ln f(X)` over points drawn from `f`,
//! which is unbiased for `h(X | w)`. Averaging over independent center draws
//! estimates the ensemble entropy `h(X | W)`.
//!
//! [`Estimator::ControlVariate`] subtracts two zero-mean terms that capture
//! the single-Gaussian part of the fluctuations:
//!
//! * per point, `|eps|^2/2 - n/2`, where `x = w_j + sigma eps`;
//! * per center set, `(tr Cov(w)/sigma^2 - n mu (q-1)/q) / 2`, where `Cov(w)`
//!   is the empirical covariance of the `q` centers.
//!
//! Both have known mean zero, so the estimate stays unbiased. At small `mu`
//! the variance drops by one to two orders of magnitude.

use std::f64::consts::{E, PI};

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::mixture::{self, CenterSet, EntropyEstimate, LogDensity, Method, MixtureConfig};
use crate::rng;

/// Default cap on `samples_per_center * center_draws`.
pub const DEFAULT_BUDGET: u64 = 5_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    #[default]
    Plain,
    ControlVariate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McSettings {
    pub samples_per_center: u64,
    pub center_draws: u64,
    pub seed: u64,
    /// Upper bound on total points, `samples_per_center * center_draws`.
    pub budget: u64,
    pub estimator: Estimator,
}

impl McSettings {
    pub fn new(samples_per_center: u64, center_draws: u64, seed: u64) -> Result<Self> {
        let s = Self {
            samples_per_center,
            center_draws,
            seed,
            budget: DEFAULT_BUDGET,
            estimator: Estimator::Plain,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_estimator(self, estimator: Estimator) -> Self {
        Self { estimator, ..self }
    }

    pub fn with_budget(self, budget: u64) -> Result<Self> {
        let s = Self { budget, ..self };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples_per_center < 1000 {
            return Err(invalid(format!(
                "samples_per_center must be at least 1000, got {}",
                self.samples_per_center
            )));
        }
        if self.center_draws < 1 {
            return Err(invalid("center_draws must be at least 1"));
        }
        let total = self.samples_per_center.checked_mul(self.center_draws);
        if total.is_none_or(|t| t > self.budget) {
            return Err(invalid(format!(
                "{} samples x {} draws exceeds the budget of {} points",
                self.samples_per_center, self.center_draws, self.budget
            )));
        }
        Ok(())
    }
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let d = x - self.mean;
        self.mean += d / self.count;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Welford) -> Welford {
        if other.count == 0.0 {
            return self;
        }
        if self.count == 0.0 {
            return other;
        }
        let count = self.count + other.count;
        let d = other.mean - self.mean;
        Welford {
            count,
            mean: self.mean + d * other.count / count,
            m2: self.m2 + other.m2 + d * d * self.count * other.count / count,
        }
    }

    fn variance(&self) -> f64 {
        if self.count < 2.0 {
            0.0
        } else {
            self.m2 / (self.count - 1.0)
        }
    }
}

/// Per-point statistics of the estimator for one center set.
fn given_centers_stats(
    config: &MixtureConfig,
    centers: &CenterSet,
    samples: usize,
    seed: u64,
    est: Estimator,
) -> Welford {
    let half_n = 0.5 * config.n as f64;
    let blocks: Vec<Welford> = (0..rng::blocks(samples))
        .into_par_iter()
        .map(|b| {
            let mut density = LogDensity::new(config, centers);
            let mut acc = Welford::default();
            mixture::visit_block(config, centers, samples, seed, b, |x, eps| {
                let mut y = -density.eval(x);
                if est == Estimator::ControlVariate {
                    y -= 0.5 * eps.iter().map(|e| e * e).sum::<f64>() - half_n;
                }
                acc.push(y);
            });
            acc
        })
        .collect();
    blocks.into_iter().fold(Welford::default(), Welford::merge)
}

/// Plug-in estimate of `h(X | w)` for one fixed center set.
pub fn entropy_given_centers(
    config: &MixtureConfig,
    centers: &CenterSet,
    settings: &McSettings,
) -> Result<EntropyEstimate> {
    config.validate()?;
    settings.validate()?;
    if centers.len() != config.q || centers.dim() != config.n {
        return Err(invalid(format!(
            "center set is {} x {}, config expects q = {}, n = {}",
            centers.len(),
            centers.dim(),
            config.q,
            config.n
        )));
    }
    let stats = given_centers_stats(
        config,
        centers,
        settings.samples_per_center as usize,
        settings.seed,
        settings.estimator,
    );
    Ok(EntropyEstimate {
        value: stats.mean,
        stderr: (stats.variance() / stats.count).sqrt(),
        method: Method::MonteCarlo,
        order: None,
        samples_per_center: Some(settings.samples_per_center),
        center_draws: Some(1),
        seed: Some(settings.seed),
    })
}

/// Seed of the `d`-th center draw; it drives both the centers and the points.
fn draw_seed(seed: u64, d: u64) -> u64 {
    rng::child_seed(seed, d)
}

/// The center sets used by [`average_entropy`] for these settings.
pub fn center_draws(config: &MixtureConfig, settings: &McSettings) -> Result<Vec<CenterSet>> {
    settings.validate()?;
    (0..settings.center_draws)
        .map(|d| mixture::sample_centers(config, draw_seed(settings.seed, d)))
        .collect()
}

/// Plug-in estimate of the ensemble entropy `E_w h(X | w)`.
///
/// The standard error treats center draws as strata: the variance of the
/// per-draw means over `M`, plus the mean within-draw variance over all
/// `M N` points. This double counts the within-draw noise and is
/// conservative. With one draw only the within-draw part is available.
pub fn average_entropy(config: &MixtureConfig, settings: &McSettings) -> Result<EntropyEstimate> {
    config.validate()?;
    settings.validate()?;
    let samples = settings.samples_per_center as usize;
    let cv = settings.estimator == Estimator::ControlVariate;
    let spread_mean = config.n as f64 * config.mu * (config.q as f64 - 1.0) / config.q as f64;
    let per_draw: Vec<(f64, f64)> = (0..settings.center_draws)
        .into_par_iter()
        .map(|d| {
            let seed = draw_seed(settings.seed, d);
            let centers = mixture::sample_centers(config, seed).expect("config validated");
            let stats = given_centers_stats(config, &centers, samples, seed, settings.estimator);
            let mut h = stats.mean;
            if cv {
                h -= 0.5 * (centers.spread_trace() / config.sigma2 - spread_mean);
            }
            (h, stats.variance())
        })
        .collect();

    let m = per_draw.len() as f64;
    let between = per_draw.iter().fold(Welford::default(), |mut w, &(h, _)| {
        w.push(h);
        w
    });
    let within = per_draw.iter().map(|&(_, v)| v).sum::<f64>() / m;
    let var = if per_draw.len() > 1 {
        between.variance() / m + within / (m * samples as f64)
    } else {
        within / samples as f64
    };
    Ok(EntropyEstimate {
        value: between.mean,
        stderr: var.sqrt(),
        method: Method::MonteCarlo,
        order: None,
        samples_per_center: Some(settings.samples_per_center),
        center_draws: Some(settings.center_draws),
        seed: Some(settings.seed),
    })
}

/// Entropy of the Gaussian with the mixture's covariance,
/// `(n/2) ln 2 pi e + (1/2) ln det Sigma`, where
/// `Sigma = sigma^2 I + (1/q) sum_i w_i w_i^T - mean mean^T`.
pub fn gaussian_bound(config: &MixtureConfig, centers: &CenterSet) -> Result<f64> {
    config.validate()?;
    let n = config.n;
    if centers.dim() != n || centers.is_empty() {
        return Err(invalid(format!(
            "centers have dimension {}, expected {n}",
            centers.dim()
        )));
    }
    let q = centers.len() as f64;
    let mean = centers.mean();
    let mut sigma = DMatrix::identity(n, n) * config.sigma2;
    for w in centers.iter() {
        for i in 0..n {
            for j in 0..n {
                sigma[(i, j)] += (w[i] - mean[i]) * (w[j] - mean[j]) / q;
            }
        }
    }
    let chol = sigma
        .cholesky()
        .expect("sigma^2 I plus a covariance is positive definite");
    let log_det: f64 = chol.l().diagonal().iter().map(|d| 2.0 * d.ln()).sum();
    Ok(0.5 * n as f64 * (2.0 * PI * E).ln() + 0.5 * log_det)
}

/// [`gaussian_bound`] averaged over the center draws of [`average_entropy`].
pub fn mean_gaussian_bound(config: &MixtureConfig, settings: &McSettings) -> Result<f64> {
    let draws = center_draws(config, settings)?;
    let total: f64 = draws
        .iter()
        .map(|c| gaussian_bound(config, c))
        .sum::<Result<f64>>()?;
    Ok(total / draws.len() as f64)
}

/// `n h_sigma + ln q`: the entropy of the component label plus that of one
/// component, attained when the components do not overlap.
pub fn component_bound(config: &MixtureConfig) -> Result<f64> {
    config.validate()?;
    Ok(config.n as f64 * config.component_entropy_1d() + (config.q as f64).ln())
}
