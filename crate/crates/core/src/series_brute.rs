//! Small-`mu` series for the average entropy by direct Taylor expansion.
//!
//! Expanding the log of the normalized exponential sum in `sqrt(mu)` gives
//! random coefficients `c_1, c_2` that are polynomials in Gaussian inner
//! products. Their expectations follow from a table of 25 moments.
//! In the standardized variables, `r` and `s` are independent standard
//! normal vectors in `R^n`, and `w_l = sum_m alpha_{m,l} u_m` for
//! `l = 1..q-1`, with `u_m` standard normal as well.
//!
//! ```text
//! aa = r.r   bb = s.s   ab = r.s
//! A = sum_l w_l.w_l          B = sum_l (w_l.r)^2
//! D = sum_l (w_l.w_l)(w_l.r) F = sum_l (w_l.w_l)^2
//! H = sum_l (w_l.w_l)(w_l.r)^2
//! M = sum_l (w_l.r)^3        J = sum_l (w_l.r)^4
//! ```

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::mixture::{EntropyEstimate, Method, MixtureConfig};
use crate::rng::{self, Purpose};
use crate::spectral;

/// Names of the moments entering the expected series coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MomentName {
    Aa,
    Bb,
    Aa2,
    Bb2,
    AaBb,
    Ab2,
    Ab2Aa,
    Ab2Bb,
    Ab4,
    A,
    B,
    A2,
    B2,
    AB,
    AaA,
    BbA,
    AaB,
    BbB,
    Ab2A,
    Ab2B,
    F,
    H,
    J,
    D,
    M,
}

impl MomentName {
    pub const ALL: [MomentName; 25] = [
        Self::Aa,
        Self::Bb,
        Self::Aa2,
        Self::Bb2,
        Self::AaBb,
        Self::Ab2,
        Self::Ab2Aa,
        Self::Ab2Bb,
        Self::Ab4,
        Self::A,
        Self::B,
        Self::A2,
        Self::B2,
        Self::AB,
        Self::AaA,
        Self::BbA,
        Self::AaB,
        Self::BbB,
        Self::Ab2A,
        Self::Ab2B,
        Self::F,
        Self::H,
        Self::J,
        Self::D,
        Self::M,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Aa => "aa",
            Self::Bb => "bb",
            Self::Aa2 => "aa2",
            Self::Bb2 => "bb2",
            Self::AaBb => "aabb",
            Self::Ab2 => "ab2",
            Self::Ab2Aa => "ab2aa",
            Self::Ab2Bb => "ab2bb",
            Self::Ab4 => "ab4",
            Self::A => "A",
            Self::B => "B",
            Self::A2 => "A2",
            Self::B2 => "B2",
            Self::AB => "AB",
            Self::AaA => "aaA",
            Self::BbA => "bbA",
            Self::AaB => "aaB",
            Self::BbB => "bbB",
            Self::Ab2A => "ab2A",
            Self::Ab2B => "ab2B",
            Self::F => "F",
            Self::H => "H",
            Self::J => "J",
            Self::D => "D",
            Self::M => "M",
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    /// Odd in `r`, so zero in expectation.
    pub fn is_odd(self) -> bool {
        matches!(self, Self::D | Self::M)
    }
}

impl fmt::Display for MomentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for MomentName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown moment name {s:?}")))
    }
}

/// A value for every [`MomentName`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentTable([f64; 25]);

impl MomentTable {
    pub fn from_fn(f: impl Fn(MomentName) -> f64) -> Self {
        Self(MomentName::ALL.map(f))
    }

    pub fn get(&self, name: MomentName) -> f64 {
        self.0[name.index()]
    }

    /// The closed-form expectations for dimension `n` and `q` components.
    pub fn closed_form(n: usize, q: usize) -> Self {
        let s_alpha = spectral::alpha_quartic_sum(q);
        Self::from_fn(|name| closed_form_value(name, n, q, s_alpha))
    }
}

impl std::ops::Index<MomentName> for MomentTable {
    type Output = f64;

    fn index(&self, name: MomentName) -> &f64 {
        &self.0[name.index()]
    }
}

fn closed_form_value(name: MomentName, n: usize, q: usize, s_alpha: f64) -> f64 {
    use MomentName::*;
    let n = n as f64;
    let q2 = q as f64 - 2.0;
    let q = q as f64;
    let n_n2 = n * (n + 2.0);
    match name {
        Aa | Bb | Ab2 => n,
        Aa2 | Bb2 | Ab2Aa | Ab2Bb => n_n2,
        AaBb => n * n,
        Ab4 => 3.0 * n_n2,
        A | B => n * q2,
        A2 | AB => n * n * q2 * q2 + 2.0 * n * q2,
        B2 => q * q2 * n_n2,
        AaA | BbA | BbB | Ab2A => n * n * q2,
        AaB | Ab2B => q2 * n_n2,
        F | H => n_n2 * s_alpha,
        J => 3.0 * n_n2 * s_alpha,
        D | M => 0.0,
    }
}

/// Closed-form expectation of one moment. `S_alpha`, the quartic sum over
/// the alpha vectors, is evaluated numerically.
pub fn moment_closed_form(name: MomentName, n: usize, q: usize) -> Result<f64> {
    if n < 1 || q < 2 {
        return Err(invalid(format!(
            "need n >= 1 and q >= 2, got n = {n}, q = {q}"
        )));
    }
    Ok(closed_form_value(
        name,
        n,
        q,
        spectral::alpha_quartic_sum(q),
    ))
}

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Clone)]
struct Sums {
    sum: [f64; 25],
    sum_sq: [f64; 25],
}

impl Sums {
    fn zero() -> Self {
        Self {
            sum: [0.0; 25],
            sum_sq: [0.0; 25],
        }
    }

    fn add(&mut self, other: &Sums) {
        for k in 0..25 {
            self.sum[k] += other.sum[k];
            self.sum_sq[k] += other.sum_sq[k];
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sample_block(
    n: usize,
    q: usize,
    alphas: &[Vec<f64>],
    samples: usize,
    seed: u64,
    block: usize,
) -> Sums {
    let k = q - 2;
    let mut rng = rng::stream(seed, Purpose::Moments, block as u64);
    let mut u = vec![0.0; k * n];
    let mut r = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut sums = Sums::zero();
    for _ in 0..rng::block_len(samples, block) {
        u.iter_mut()
            .chain(r.iter_mut())
            .chain(s.iter_mut())
            .for_each(|v| *v = rng::normal(&mut rng));
        let aa = dot(&r, &r);
        let bb = dot(&s, &s);
        let ab = dot(&r, &s);
        let (mut a, mut b, mut d, mut f, mut h, mut m, mut j) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for l in 0..q - 1 {
            w.iter_mut().for_each(|v| *v = 0.0);
            for (mi, alpha) in alphas.iter().enumerate() {
                let c = alpha[l];
                if c != 0.0 {
                    w.iter_mut()
                        .zip(&u[mi * n..(mi + 1) * n])
                        .for_each(|(wv, uv)| *wv += c * uv);
                }
            }
            let ww = dot(&w, &w);
            let wr = dot(&w, &r);
            let wr2 = wr * wr;
            a += ww;
            b += wr2;
            d += ww * wr;
            f += ww * ww;
            h += ww * wr2;
            m += wr2 * wr;
            j += wr2 * wr2;
        }
        let ab2 = ab * ab;
        let values = [
            aa,
            bb,
            aa * aa,
            bb * bb,
            aa * bb,
            ab2,
            ab2 * aa,
            ab2 * bb,
            ab2 * ab2,
            a,
            b,
            a * a,
            b * b,
            a * b,
            aa * a,
            bb * a,
            aa * b,
            bb * b,
            ab2 * a,
            ab2 * b,
            f,
            h,
            j,
            d,
            m,
        ];
        for (idx, v) in values.into_iter().enumerate() {
            sums.sum[idx] += v;
            sums.sum_sq[idx] += v * v;
        }
    }
    sums
}

/// Monte Carlo estimates of all 25 moments from one shared set of draws.
pub fn moment_mc_all(
    n: usize,
    q: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<(MomentName, MomentEstimate)>> {
    if n < 1 || q < 2 {
        return Err(invalid(format!(
            "need n >= 1 and q >= 2, got n = {n}, q = {q}"
        )));
    }
    if n > q {
        return Err(Error::Precondition(format!(
            "moment sampling needs n <= q, got n = {n}, q = {q}"
        )));
    }
    if samples < 1000 {
        return Err(invalid(format!(
            "need at least 1000 samples, got {samples}"
        )));
    }
    let alphas = spectral::alpha_vectors(q);
    let blocks: Vec<Sums> = (0..rng::blocks(samples))
        .into_par_iter()
        .map(|b| sample_block(n, q, &alphas, samples, seed, b))
        .collect();
    let mut total = Sums::zero();
    blocks.iter().for_each(|s| total.add(s));
    let count = samples as f64;
    Ok(MomentName::ALL
        .into_iter()
        .map(|name| {
            let k = name.index();
            let mean = total.sum[k] / count;
            let var = ((total.sum_sq[k] - total.sum[k] * mean) / (count - 1.0)).max(0.0);
            (
                name,
                MomentEstimate {
                    mean,
                    stderr: (var / count).sqrt(),
                },
            )
        })
        .collect())
}

/// Monte Carlo estimate of one moment. All names are computed from the same
/// draws, so this is [`moment_mc_all`] with a lookup.
pub fn moment_mc(
    name: MomentName,
    n: usize,
    q: usize,
    samples: usize,
    seed: u64,
) -> Result<MomentEstimate> {
    Ok(moment_mc_all(n, q, samples, seed)?
        .into_iter()
        .find(|(m, _)| *m == name)
        .map(|(_, e)| e)
        .expect("every name is sampled"))
}

/// Expected series coefficients for dimension `n` and `q` components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesCoefficients {
    pub c1_expect: f64,
    pub c2_expect: f64,
    pub n: usize,
    pub q: usize,
}

/// `E[c_1] = n (2q - 1) / (2 q (q - 1))`.
pub fn c1_closed_form(n: usize, q: usize) -> f64 {
    let (n, q) = (n as f64, q as f64);
    n * (2.0 * q - 1.0) / (2.0 * q * (q - 1.0))
}

/// `E[c_2] = n (n + q)(q - 1) / (4 q^2)`.
pub fn c2_closed_form(n: usize, q: usize) -> f64 {
    let (n, q) = (n as f64, q as f64);
    n * (n + q) * (q - 1.0) / (4.0 * q * q)
}

/// `2q(q-1) c_1` with every symbol replaced by its table entry, divided out.
pub fn assemble_c1(t: &MomentTable, q: usize) -> f64 {
    use MomentName::*;
    let q = q as f64;
    let q1 = q - 1.0;
    (-q1 * t[A] + q1 * t[B] + 2.0 * q * t[Aa] - q * t[Bb] + q1 * t[Ab2]) / (2.0 * q * q1)
}

/// `24 q^2 (q-1)^2 c_2` with every symbol replaced by its table entry, divided out.
pub fn assemble_c2(t: &MomentTable, q: usize) -> f64 {
    use MomentName::*;
    let q = q as f64;
    let q1 = q - 1.0;
    let (qq, qqq) = (q * q, q * q * q);
    let total = -3.0 * q1 * q1 * t[A2] - 3.0 * t[B2] + 12.0 * q * t[AaB] + 6.0 * q * t[B2]
        - 6.0 * q * t[BbB]
        + 3.0 * q * t[F]
        - 6.0 * q * t[H]
        + q * t[J]
        - 12.0 * qq * t[Aa2]
        - 12.0 * qq * t[B]
        - 12.0 * qq * t[AaB]
        - 3.0 * qq * t[B2]
        + 12.0 * qq * t[AaBb]
        + 6.0 * qq * t[BbB]
        - 3.0 * qq * t[Bb2]
        - 6.0 * qq * t[F]
        + 12.0 * qq * t[H]
        - 2.0 * qq * t[J]
        - 12.0 * qqq * t[Aa]
        + 12.0 * qqq * t[Aa2]
        + 12.0 * qqq * t[B]
        + 12.0 * qqq * t[Bb]
        - 12.0 * qqq * t[AaBb]
        + 3.0 * qqq * t[Bb2]
        + 3.0 * qqq * t[F]
        - 6.0 * qqq * t[H]
        + qqq * t[J]
        + 6.0 * q1 * ((q - 2.0) * t[Ab2A] + q1 * t[AB] + 2.0 * q * t[AaA] - q * t[BbA])
        + (qqq - 7.0 * qq + 12.0 * q - 6.0) * t[Ab4]
        - 6.0
            * q1
            * ((q - 2.0) * t[Ab2B] - 2.0 * q * (q - 2.0) * t[Ab2Aa]
                + q * (q - 2.0) * t[Ab2Bb]
                + 4.0 * qq * t[Ab2]);
    total / (24.0 * qq * q1 * q1)
}

fn check_assembly(what: &'static str, assembled: f64, closed_form: f64) -> Result<()> {
    if (assembled - closed_form).abs() > 1e-9 * closed_form.abs() {
        return Err(Error::AssemblyMismatch {
            what,
            assembled,
            closed_form,
        });
    }
    Ok(())
}

/// Largest relative gap between the term-by-term assembly of `E[c_1]`,
/// `E[c_2]` and their closed forms.
pub fn assembly_residual(n: usize, q: usize) -> f64 {
    let table = MomentTable::closed_form(n, q);
    let r1 = (assemble_c1(&table, q) / c1_closed_form(n, q) - 1.0).abs();
    let r2 = (assemble_c2(&table, q) / c2_closed_form(n, q) - 1.0).abs();
    r1.max(r2)
}

/// Assembles `E[c_1]` and `E[c_2]` term by term from the moment table and
/// checks them against their closed forms.
pub fn series_coefficients(n: usize, q: usize) -> Result<SeriesCoefficients> {
    if n < 1 || q < 2 {
        return Err(invalid(format!(
            "need n >= 1 and q >= 2, got n = {n}, q = {q}"
        )));
    }
    let table = MomentTable::closed_form(n, q);
    let c1 = assemble_c1(&table, q);
    let c2 = assemble_c2(&table, q);
    check_assembly("E[c1]", c1, c1_closed_form(n, q))?;
    check_assembly("E[c2]", c2, c2_closed_form(n, q))?;
    Ok(SeriesCoefficients {
        c1_expect: c1,
        c2_expect: c2,
        n,
        q,
    })
}

/// Average entropy through order `mu^order`:
///
/// ```text
/// h = n h_sigma + (n/2)(1 - 1/q) mu - n (n + q)(q - 1) / (4 q^2) mu^2 + O(mu^3)
/// ```
///
/// The value is also assembled as the Gaussian part
/// `n h_sigma + (n/2) q/(q-1) mu` plus the correction
/// `-E[c_1] mu - E[c_2] mu^2`, and the two must agree to `1e-12`.
pub fn entropy_series(config: &MixtureConfig, order: u8) -> Result<EntropyEstimate> {
    config.require_series_domain()?;
    if order > 2 {
        return Err(invalid(format!(
            "series order must be 0, 1 or 2, got {order}"
        )));
    }
    let (n, q, mu) = (config.n, config.q, config.mu);
    let (nf, qf) = (n as f64, q as f64);
    let base = nf * config.component_entropy_1d();
    let first = order >= 1;
    let second = order >= 2;

    let mut direct = base;
    if first {
        direct += 0.5 * nf * (1.0 - 1.0 / qf) * mu;
    }
    if second {
        direct -= c2_closed_form(n, q) * mu * mu;
    }

    let coeffs = series_coefficients(n, q)?;
    let mut split = base;
    if first {
        split += 0.5 * nf * qf / (qf - 1.0) * mu - coeffs.c1_expect * mu;
    }
    if second {
        split -= coeffs.c2_expect * mu * mu;
    }
    if (direct - split).abs() > 1e-12 * direct.abs().max(1.0) {
        return Err(Error::AssemblyMismatch {
            what: "entropy series",
            assembled: split,
            closed_form: direct,
        });
    }
    Ok(EntropyEstimate::exact(
        direct,
        Method::SeriesBrute,
        Some(order),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixture::gaussian_entropy_1d;

    #[test]
    fn table_examples() {
        assert_eq!(moment_closed_form(MomentName::A, 3, 5).unwrap(), 9.0);
        assert_eq!(moment_closed_form(MomentName::B2, 3, 5).unwrap(), 225.0);
        for (n, q) in [(1, 2), (2, 7), (5, 5)] {
            assert_eq!(moment_closed_form(MomentName::D, n, q).unwrap(), 0.0);
            assert_eq!(moment_closed_form(MomentName::M, n, q).unwrap(), 0.0);
        }
    }

    #[test]
    fn names_round_trip() {
        for name in MomentName::ALL {
            assert_eq!(name.as_str().parse::<MomentName>().unwrap(), name);
        }
        assert!("nope".parse::<MomentName>().is_err());
    }

    #[test]
    fn small_coefficients() {
        let c = series_coefficients(1, 2).unwrap();
        assert!((c.c1_expect - 0.75).abs() < 1e-15);
        assert!((c.c2_expect - 3.0 / 16.0).abs() < 1e-15);
        let c = series_coefficients(3, 3).unwrap();
        assert!((c.c1_expect - 1.25).abs() < 1e-15);
    }

    #[test]
    fn assembly_grid() {
        for q in 2..=12 {
            for n in 1..=q {
                series_coefficients(n, q).unwrap();
            }
        }
    }

    #[test]
    fn corrupted_table_is_caught() {
        let mut t = MomentTable::closed_form(2, 4);
        t.0[MomentName::Ab4.index()] += 1.0;
        let c2 = assemble_c2(&t, 4);
        assert!(check_assembly("E[c2]", c2, c2_closed_form(2, 4)).is_err());
    }

    #[test]
    fn zero_mu_is_single_gaussian() {
        for order in 0..=2 {
            let c = MixtureConfig::new(3, 4, 2.0, 0.0).unwrap();
            let e = entropy_series(&c, order).unwrap();
            assert!((e.value - 3.0 * gaussian_entropy_1d(2.0)).abs() < 1e-15);
            assert_eq!(e.stderr, 0.0);
        }
    }

    #[test]
    fn first_order_example() {
        let c = MixtureConfig::new(3, 3, 1.0, 0.1).unwrap();
        let e = entropy_series(&c, 1).unwrap();
        assert!((e.value - 4.356_815_6).abs() < 1e-7, "{}", e.value);
    }

    #[test]
    fn large_q_second_order_coefficient() {
        // n = q: the mu^2 coefficient tends to -(n/2)(1 - 1/q)(n/q + 1)/2 -> -n/2.
        let q = 400;
        let c = MixtureConfig::new(q, q, 1.0, 1e-4).unwrap();
        let d = entropy_series(&c, 2).unwrap().value - entropy_series(&c, 1).unwrap().value;
        let coeff = d / (c.mu * c.mu);
        let expect = -(q as f64 / 2.0) * (1.0 - 1.0 / q as f64);
        assert!(
            (coeff - expect).abs() < 1e-6 * expect.abs(),
            "{coeff} vs {expect}"
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        let c = MixtureConfig::new(5, 3, 1.0, 0.1).unwrap();
        assert!(matches!(entropy_series(&c, 2), Err(Error::Precondition(_))));
        let c = MixtureConfig::new(2, 3, 1.0, 0.1).unwrap();
        assert!(entropy_series(&c, 3).is_err());
        assert!(moment_mc_all(3, 2, 10_000, 0).is_err());
        assert!(moment_mc_all(1, 2, 999, 0).is_err());
    }

    #[test]
    fn q2_alpha_moments_vanish_exactly() {
        let est = moment_mc_all(1, 2, 2000, 3).unwrap();
        for (name, e) in est {
            if matches!(
                name,
                MomentName::A
                    | MomentName::B
                    | MomentName::D
                    | MomentName::F
                    | MomentName::H
                    | MomentName::M
                    | MomentName::J
            ) {
                assert_eq!((e.mean, e.stderr), (0.0, 0.0), "{name}");
            }
        }
    }

    #[test]
    fn moment_mc_is_deterministic() {
        let a = moment_mc(MomentName::H, 2, 4, 10_000, 5).unwrap();
        let b = moment_mc(MomentName::H, 2, 4, 10_000, 5).unwrap();
        assert_eq!(a, b);
    }
}
