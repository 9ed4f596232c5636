//! Average differential entropy of equal-weight isotropic Gaussian mixtures
//! whose centers are drawn i.i.d. from a Gaussian.
//!
//! With `q` components of variance `sigma^2` in `R^n` and centers drawn from
//! `N(0, mu sigma^2 I)`, the ensemble-average entropy has the small-`mu`
//! expansion
//!
//! ```text
//! h = n h_sigma + (n/2)(1 - 1/q) mu - n (n + q)(q - 1)/(4 q^2) mu^2 + O(mu^3)
//! ```
//!
//! for `n <= q`, with `h_sigma = ln(sigma sqrt(2 pi e))`. The crate computes
//! it two ways ([`series_brute`], [`series_det`]), checks every analytic
//! ingredient ([`spectral`]) and compares against Monte Carlo ([`oracle`]).

pub mod cli;
pub mod error;
pub mod mixture;
pub mod oracle;
mod rng;
pub mod series_brute;
pub mod series_det;
pub mod spectral;

pub use error::{Error, Result};
pub use mixture::{CenterSet, EntropyEstimate, Method, MixtureConfig};
pub use oracle::{Estimator, McSettings};
