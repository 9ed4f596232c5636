//! Equal-weight isotropic Gaussian mixtures: parameters, density, sampling.
//!
//! The mixture density is
//!
//! ```text
//! f(x | w) = (2 pi sigma^2)^(-n/2) (1/q) sum_j exp(-|x - w_j|^2 / (2 sigma^2))
//! ```
//!
//! and the random ensemble draws each center `w_j` i.i.d. from
//! `N(0, s^2 I_n)` with `s^2 = mu * sigma^2`. All entropies are in nats.

use std::f64::consts::{E, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::rng::{self, Purpose};

/// Entropy of a one-dimensional Gaussian with variance `sigma2`:
/// `ln(sigma * sqrt(2 pi e))`.
pub fn gaussian_entropy_1d(sigma2: f64) -> f64 {
    0.5 * (2.0 * PI * E * sigma2).ln()
}

/// Parameters of the random mixture ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureConfig {
    /// Ambient dimension.
    pub n: usize,
    /// Number of components.
    pub q: usize,
    /// Component variance.
    pub sigma2: f64,
    /// Center spread relative to component variance, `s^2 / sigma^2`.
    pub mu: f64,
}

impl MixtureConfig {
    pub fn new(n: usize, q: usize, sigma2: f64, mu: f64) -> Result<Self> {
        let config = Self { n, q, sigma2, mu };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(invalid("dimension n must be at least 1"));
        }
        if self.q < 2 {
            return Err(invalid(format!(
                "component count q must be at least 2, got {}",
                self.q
            )));
        }
        if !(self.sigma2.is_finite() && self.sigma2 > 0.0) {
            return Err(invalid(format!(
                "sigma2 must be positive and finite, got {}",
                self.sigma2
            )));
        }
        if !(self.mu.is_finite() && self.mu >= 0.0) {
            return Err(invalid(format!(
                "mu must be non-negative and finite, got {}",
                self.mu
            )));
        }
        Ok(())
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }

    /// Variance `s^2 = mu sigma^2` of each center coordinate.
    pub fn center_variance(&self) -> f64 {
        self.mu * self.sigma2
    }

    /// `h_sigma`, the per-dimension entropy of one component.
    pub fn component_entropy_1d(&self) -> f64 {
        gaussian_entropy_1d(self.sigma2)
    }

    pub fn with_mu(&self, mu: f64) -> Self {
        Self { mu, ..*self }
    }

    /// Checks the domain of the small-`mu` expansions: `n <= q`.
    ///
    /// The expansions are effectively in `n * mu`, so a warning is logged
    /// once that product exceeds one.
    pub(crate) fn require_series_domain(&self) -> Result<()> {
        self.validate()?;
        if self.n > self.q {
            return Err(Error::Precondition(format!(
                "series expansions need n <= q (got n = {}, q = {}); apply reduce_dimension first",
                self.n, self.q
            )));
        }
        if self.n as f64 * self.mu > 1.0 {
            log::warn!(
                "n * mu = {} exceeds 1; the truncated series is unreliable here",
                self.n as f64 * self.mu
            );
        }
        Ok(())
    }
}

/// One realization of the `q` component centers in `R^n`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterSet {
    dim: usize,
    coords: Vec<f64>,
}

impl CenterSet {
    pub fn new(centers: Vec<Vec<f64>>) -> Result<Self> {
        let dim = centers
            .first()
            .map(Vec::len)
            .ok_or_else(|| invalid("empty center set"))?;
        if dim == 0 {
            return Err(invalid("centers must have dimension at least 1"));
        }
        if let Some((j, c)) = centers.iter().enumerate().find(|(_, c)| c.len() != dim) {
            return Err(invalid(format!(
                "center {j} has dimension {}, expected {dim}",
                c.len()
            )));
        }
        Ok(Self {
            dim,
            coords: centers.into_iter().flatten().collect(),
        })
    }

    pub(crate) fn from_flat(dim: usize, coords: Vec<f64>) -> Self {
        debug_assert!(dim > 0 && coords.len().is_multiple_of(dim));
        Self { dim, coords }
    }

    pub fn zeros(q: usize, n: usize) -> Self {
        Self::from_flat(n, vec![0.0; q * n])
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn center(&self, j: usize) -> &[f64] {
        &self.coords[j * self.dim..(j + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn to_vecs(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    pub fn mean(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.dim];
        for c in self.iter() {
            mean.iter_mut().zip(c).for_each(|(m, v)| *m += v);
        }
        let q = self.len() as f64;
        mean.iter_mut().for_each(|m| *m /= q);
        mean
    }

    /// `(1/q) sum_j |w_j - mean|^2`, the trace of the centers' covariance.
    pub fn spread_trace(&self) -> f64 {
        let mean = self.mean();
        let total: f64 = self
            .iter()
            .map(|c| {
                c.iter()
                    .zip(&mean)
                    .map(|(v, m)| (v - m) * (v - m))
                    .sum::<f64>()
            })
            .sum();
        total / self.len() as f64
    }

    pub fn translated(&self, shift: &[f64]) -> Self {
        assert_eq!(shift.len(), self.dim);
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(k, v)| v + shift[k % self.dim])
            .collect();
        Self {
            dim: self.dim,
            coords,
        }
    }

    /// Applies `w -> R w` to every center; `rotation` is `dim x dim` row-major.
    pub fn rotated(&self, rotation: &[f64]) -> Self {
        assert_eq!(rotation.len(), self.dim * self.dim);
        let n = self.dim;
        let mut coords = Vec::with_capacity(self.coords.len());
        for c in self.iter() {
            for row in rotation.chunks_exact(n) {
                coords.push(row.iter().zip(c).map(|(r, v)| r * v).sum());
            }
        }
        Self { dim: n, coords }
    }

    fn check_against(&self, config: &MixtureConfig) -> Result<()> {
        if self.len() != config.q || self.dim != config.n {
            return Err(invalid(format!(
                "center set is {} x {}, config expects q = {}, n = {}",
                self.len(),
                self.dim,
                config.q,
                config.n
            )));
        }
        Ok(())
    }
}

/// How an [`EntropyEstimate`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    SeriesBrute,
    SeriesDet,
    MonteCarlo,
    BoundGaussian,
    BoundComponent,
}

impl Method {
    pub fn is_deterministic(self) -> bool {
        !matches!(self, Method::MonteCarlo)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::SeriesBrute => "series-brute",
            Method::SeriesDet => "series-det",
            Method::MonteCarlo => "monte-carlo",
            Method::BoundGaussian => "bound-gaussian",
            Method::BoundComponent => "bound-component",
        }
    }
}

/// An entropy value in nats together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub value: f64,
    /// Standard error; zero for deterministic methods.
    pub stderr: f64,
    pub method: Method,
    pub order: Option<u8>,
    pub samples_per_center: Option<u64>,
    pub center_draws: Option<u64>,
    pub seed: Option<u64>,
}

impl EntropyEstimate {
    pub fn exact(value: f64, method: Method, order: Option<u8>) -> Self {
        debug_assert!(method.is_deterministic());
        Self {
            value,
            stderr: 0.0,
            method,
            order,
            samples_per_center: None,
            center_draws: None,
            seed: None,
        }
    }

    /// Shifts the value by a constant, e.g. a dimension-reduction offset.
    pub fn shifted(mut self, offset: f64) -> Self {
        self.value += offset;
        self
    }
}

/// Evaluates `ln f(x | w)` repeatedly without reallocating.
pub(crate) struct LogDensity<'a> {
    centers: &'a CenterSet,
    inv_two_sigma2: f64,
    log_norm: f64,
    exponents: Vec<f64>,
}

impl<'a> LogDensity<'a> {
    pub(crate) fn new(config: &MixtureConfig, centers: &'a CenterSet) -> Self {
        let q = centers.len();
        Self {
            centers,
            inv_two_sigma2: 0.5 / config.sigma2,
            log_norm: -0.5 * config.n as f64 * (2.0 * PI * config.sigma2).ln() - (q as f64).ln(),
            exponents: vec![0.0; q],
        }
    }

    #[inline]
    pub(crate) fn eval(&mut self, x: &[f64]) -> f64 {
        let mut max = f64::NEG_INFINITY;
        for (a, w) in self.exponents.iter_mut().zip(self.centers.iter()) {
            let d2: f64 = x.iter().zip(w).map(|(xi, wi)| (xi - wi) * (xi - wi)).sum();
            *a = -d2 * self.inv_two_sigma2;
            max = max.max(*a);
        }
        let sum: f64 = self.exponents.iter().map(|a| (a - max).exp()).sum();
        self.log_norm + max + sum.ln()
    }
}

/// `ln f(x | w)` with log-sum-exp stabilization.
pub fn log_density(config: &MixtureConfig, centers: &CenterSet, x: &[f64]) -> Result<f64> {
    config.validate()?;
    centers.check_against(config)?;
    if x.len() != config.n {
        return Err(invalid(format!(
            "point has dimension {}, expected {}",
            x.len(),
            config.n
        )));
    }
    Ok(LogDensity::new(config, centers).eval(x))
}

/// Draws the `q` centers i.i.d. from `N(0, mu sigma^2 I_n)`.
pub fn sample_centers(config: &MixtureConfig, seed: u64) -> Result<CenterSet> {
    config.validate()?;
    let (q, n) = (config.q, config.n);
    if config.mu == 0.0 {
        return Ok(CenterSet::zeros(q, n));
    }
    let s = config.center_variance().sqrt();
    let mut rng = rng::stream(seed, Purpose::Centers, 0);
    let coords = (0..q * n).map(|_| s * rng::normal(&mut rng)).collect();
    Ok(CenterSet::from_flat(n, coords))
}

/// Feeds every point of block `block` to `visit` as `(x, eps)` where
/// `x = w_j + sigma * eps` for a uniformly chosen component `j`.
pub(crate) fn visit_block<F>(
    config: &MixtureConfig,
    centers: &CenterSet,
    count: usize,
    seed: u64,
    block: usize,
    mut visit: F,
) where
    F: FnMut(&[f64], &[f64]),
{
    let n = config.n;
    let q = centers.len();
    let sigma = config.sigma();
    let mut rng = rng::stream(seed, Purpose::Points, block as u64);
    let mut x = vec![0.0; n];
    let mut eps = vec![0.0; n];
    for _ in 0..rng::block_len(count, block) {
        let j = rand::Rng::random_range(&mut rng, 0..q);
        let w = centers.center(j);
        for i in 0..n {
            eps[i] = rng::normal(&mut rng);
            x[i] = w[i] + sigma * eps[i];
        }
        visit(&x, &eps);
    }
}

/// Draws `count` points from the mixture defined by `centers`.
pub fn sample_mixture(
    config: &MixtureConfig,
    centers: &CenterSet,
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    config.validate()?;
    centers.check_against(config)?;
    let blocks: Vec<Vec<Vec<f64>>> = (0..rng::blocks(count))
        .into_par_iter()
        .map(|b| {
            let mut out = Vec::with_capacity(rng::block_len(count, b));
            visit_block(config, centers, count, seed, b, |x, _| out.push(x.to_vec()));
            out
        })
        .collect();
    Ok(blocks.into_iter().flatten().collect())
}

/// Result of splitting off the dimensions beyond `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Reduction {
    pub config: MixtureConfig,
    /// Entropy carried by the `n - q` dropped dimensions, `(n - q) h_sigma`.
    pub offset: f64,
}

/// Replaces `n > q` by `n' = q` plus a constant entropy offset.
///
/// For a fixed center set the split is exact: rotate the centers into the
/// first `q` coordinates and the remaining `n - q` coordinates are
/// independent `N(0, sigma^2)` noise. The average over i.i.d. Gaussian
/// centers is a different matter: the rotated centers are no longer i.i.d.
/// Gaussian in `R^q`, and the average entropy of the `(n, q)` ensemble exceeds
/// `offset` plus that of the `(q, q)` ensemble by `(n - q)(q - 1) mu / (2q)`
/// at first order.
pub fn reduce_dimension(config: &MixtureConfig) -> Reduction {
    if config.n <= config.q {
        return Reduction {
            config: *config,
            offset: 0.0,
        };
    }
    let dropped = (config.n - config.q) as f64;
    Reduction {
        config: MixtureConfig {
            n: config.q,
            ..*config
        },
        offset: dropped * config.component_entropy_1d(),
    }
}
