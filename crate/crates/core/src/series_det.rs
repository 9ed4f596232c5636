//! The determinant route to the small-`mu` expansion.
//!
//! Writing `Z = 1 - q^-1 sum_l exp(-a^T Q_l a / 2) - q^-1 exp(-a^T P a / 2)`
//! in the standardized Gaussian vector `a`, every moment `E[Z^k]` is a finite
//! sum of Gaussian integrals
//!
//! ```text
//! E exp(-a^T V a / 2) = det(I + V)^(-n/2)
//! ```
//!
//! over sums of the matrices `P` and `Q_l`. The first two terms, `Z1` and
//! `Z2`, give the entropy through order `mu`.
//!
//! Higher orders follow the same recipe: expanding `E[Z^k]` for `k` up to
//! `2t` only needs determinants of the generic form
//! `det(I + r P + sum_i t_i Q_{l_i})`, which [`generic_determinant`]
//! evaluates numerically.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::mixture::{EntropyEstimate, Method, MixtureConfig};
use crate::spectral;

/// Every determinant entering `Z1` and `Z2` must exceed this.
pub const VALIDITY_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MatrixKind {
    P,
    /// `Q_l` with 1-based `l` in `1..=q-1`.
    Q(usize),
}

/// A symmetric `q x q` matrix `V` such that the exponent is `-a^T V a / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticFormMatrix {
    pub kind: MatrixKind,
    pub q: usize,
    pub mu: f64,
    pub entries: DMatrix<f64>,
}

fn check(q: usize, mu: f64) -> Result<()> {
    if q < 2 {
        return Err(invalid(format!("q must be at least 2, got {q}")));
    }
    if !(mu.is_finite() && mu > 0.0) {
        return Err(invalid(format!("mu must be positive and finite, got {mu}")));
    }
    Ok(())
}

fn check_ell(q: usize, ell: usize) -> Result<()> {
    if ell < 1 || ell > q - 1 {
        return Err(invalid(format!("l must lie in 1..={}, got {ell}", q - 1)));
    }
    Ok(())
}

fn kappa(q: usize) -> f64 {
    q as f64 / (q as f64 - 1.0)
}

/// `P`: nonzero only in the trailing 2x2 block.
pub fn build_p(q: usize, mu: f64) -> Result<QuadraticFormMatrix> {
    check(q, mu)?;
    let mk = mu * kappa(q);
    let c = 1.0 / (1.0 + mk);
    let mut p = DMatrix::zeros(q, q);
    p[(q - 1, q - 1)] = c * mk;
    p[(q - 2, q - 2)] = -c * mk * (2.0 + mk);
    p[(q - 2, q - 1)] = c * mk.sqrt();
    p[(q - 1, q - 2)] = c * mk.sqrt();
    Ok(QuadraticFormMatrix {
        kind: MatrixKind::P,
        q,
        mu,
        entries: p,
    })
}

/// `Q_l = mu w w^T + sqrt(mu (1 + mu q/(q-1))) (w e^T + e w^T)`, where `w`
/// holds the `l`-th entries of the alpha vectors (zero-padded) and `e` is
/// the unit vector in position `q - 1`. For `q = 2` there are no alpha
/// vectors and `Q_1 = 0`.
pub fn build_q(q: usize, mu: f64, ell: usize) -> Result<QuadraticFormMatrix> {
    check(q, mu)?;
    check_ell(q, ell)?;
    let mut omega = vec![0.0; q];
    for (m, a) in spectral::alpha_vectors(q).iter().enumerate() {
        omega[m] = a[ell - 1];
    }
    let coupling = (mu * (1.0 + mu * kappa(q))).sqrt();
    let e = q - 2;
    let mut v = DMatrix::zeros(q, q);
    for i in 0..q {
        for j in 0..q {
            let mut x = mu * omega[i] * omega[j];
            if j == e {
                x += coupling * omega[i];
            }
            if i == e {
                x += coupling * omega[j];
            }
            v[(i, j)] = x;
        }
    }
    Ok(QuadraticFormMatrix {
        kind: MatrixKind::Q(ell),
        q,
        mu,
        entries: v,
    })
}

/// The determinant forms with closed expressions. `l` indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DetForm {
    /// `det(I + t P)`
    IP { t: u32 },
    /// `det(I + t Q_l)`
    IQ { t: u32, ell: usize },
    /// `det(I + P + Q_l)`
    IPQ { ell: usize },
    /// `det(I + Q_l + Q_l')`, `l != l'`
    IQQ { ell: usize, ell2: usize },
}

/// Closed-form determinant; `k = q/(q-1)` below.
///
/// ```text
/// det(I + tP)          = 1 - mu t(t+1) k
/// det(I + tQ_l)        = 1 - mu t(t-1)(q-2)/(q-1) - t^2 mu^2 q(q-2)/(q-1)^2
/// det(I + P + Q_l)     = 1 - 2 mu k - 4 mu^2 q(q-2)/(q-1)^2
/// det(I + Q_l + Q_l')  = 1 + 2mu/(q-1) - mu^2 (3q-1)(q-3)/(q-1)^2 - 2 mu^3 q(q-3)/(q-1)^2
/// ```
pub fn det_closed_form(form: DetForm, q: usize, mu: f64) -> Result<f64> {
    check(q, mu)?;
    let qf = q as f64;
    let q1 = qf - 1.0;
    let q1sq = q1 * q1;
    let value = match form {
        DetForm::IP { t } => {
            check_t(t)?;
            let t = t as f64;
            1.0 - mu * t * (t + 1.0) * kappa(q)
        }
        DetForm::IQ { t, ell } => {
            check_t(t)?;
            check_ell(q, ell)?;
            let t = t as f64;
            1.0 - mu * t * (t - 1.0) * (qf - 2.0) / q1 - t * t * mu * mu * qf * (qf - 2.0) / q1sq
        }
        DetForm::IPQ { ell } => {
            check_ell(q, ell)?;
            1.0 - 2.0 * mu * kappa(q) - 4.0 * mu * mu * qf * (qf - 2.0) / q1sq
        }
        DetForm::IQQ { ell, ell2 } => {
            check_ell(q, ell)?;
            check_ell(q, ell2)?;
            if ell == ell2 {
                return Err(invalid(
                    "det(I + Q_l + Q_l') needs l != l'; use IQ with t = 2",
                ));
            }
            1.0 + 2.0 * mu / q1
                - mu * mu * (3.0 * qf - 1.0) * (qf - 3.0) / q1sq
                - 2.0 * mu.powi(3) * qf * (qf - 3.0) / q1sq
        }
    };
    Ok(value)
}

fn check_t(t: u32) -> Result<()> {
    if t < 1 {
        return Err(invalid("t must be at least 1"));
    }
    Ok(())
}

fn weighted_sum(q: usize, terms: &[(f64, &QuadraticFormMatrix)]) -> Result<DMatrix<f64>> {
    let mut v = DMatrix::identity(q, q);
    for (w, m) in terms {
        if m.q != q {
            return Err(invalid(format!("matrix is {0}x{0}, expected {q}x{q}", m.q)));
        }
        v += &m.entries * *w;
    }
    Ok(v)
}

fn dim_of(terms: &[(f64, &QuadraticFormMatrix)], q: Option<usize>) -> Result<usize> {
    terms
        .first()
        .map(|(_, m)| m.q)
        .or(q)
        .ok_or_else(|| invalid("empty sum needs an explicit dimension"))
}

/// `det(I + sum_i w_i V_i)` by LU with partial pivoting. Any sign is
/// returned; `q` is only consulted when `terms` is empty.
pub fn det_numeric(terms: &[(f64, &QuadraticFormMatrix)], q: Option<usize>) -> Result<f64> {
    let dim = dim_of(terms, q)?;
    Ok(weighted_sum(dim, terms)?.lu().determinant())
}

/// As [`det_numeric`], but requires `I + sum_i w_i V_i` to be positive
/// definite (Cholesky must succeed).
pub fn det_numeric_pd(terms: &[(f64, &QuadraticFormMatrix)], q: Option<usize>) -> Result<f64> {
    let dim = dim_of(terms, q)?;
    let v = weighted_sum(dim, terms)?;
    let chol = v.cholesky().ok_or_else(|| {
        Error::NotPositiveDefinite(
            "I + sum of quadratic forms; mu is outside the validity region".into(),
        )
    })?;
    Ok(chol.l().diagonal().iter().map(|d| d * d).product())
}

/// `det(I + r P + sum_i t_i Q_{l_i})`, the building block of every higher
/// `E[Z^k]`.
pub fn generic_determinant(q: usize, mu: f64, r: f64, qs: &[(usize, f64)]) -> Result<f64> {
    let p = build_p(q, mu)?;
    let qm = qs
        .iter()
        .map(|&(ell, _)| build_q(q, mu, ell))
        .collect::<Result<Vec<_>>>()?;
    let mut terms = vec![(r, &p)];
    terms.extend(qs.iter().zip(&qm).map(|(&(_, t), m)| (t, m)));
    det_numeric(&terms, Some(q))
}

/// Largest relative error between the closed forms and LU determinants over
/// every form, every valid `(l, l')` pair and `t = 1..=t_max`.
pub fn closed_form_max_error(q: usize, mu: f64, t_max: u32) -> Result<f64> {
    if q < 3 {
        return Err(invalid(format!("the Q forms need q >= 3, got {q}")));
    }
    let p = build_p(q, mu)?;
    let qs = (1..q)
        .map(|l| build_q(q, mu, l))
        .collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    let mut compare = |form: DetForm, terms: &[(f64, &QuadraticFormMatrix)]| -> Result<()> {
        let closed = det_closed_form(form, q, mu)?;
        let numeric = det_numeric(terms, None)?;
        worst = worst.max((numeric - closed).abs() / closed.abs());
        Ok(())
    };
    for t in 1..=t_max {
        let tf = t as f64;
        compare(DetForm::IP { t }, &[(tf, &p)])?;
        for (i, a) in qs.iter().enumerate() {
            compare(DetForm::IQ { t, ell: i + 1 }, &[(tf, a)])?;
        }
    }
    for (i, a) in qs.iter().enumerate() {
        compare(DetForm::IPQ { ell: i + 1 }, &[(1.0, &p), (1.0, a)])?;
        for (j, b) in qs.iter().enumerate().filter(|(j, _)| *j != i) {
            compare(
                DetForm::IQQ {
                    ell: i + 1,
                    ell2: j + 1,
                },
                &[(1.0, a), (1.0, b)],
            )?;
        }
    }
    Ok(worst)
}

fn power(what: &str, det: f64, n: usize) -> Result<f64> {
    if det.is_nan() || det <= VALIDITY_THRESHOLD {
        return Err(Error::ValidityRegion {
            what: what.to_string(),
            value: det,
            threshold: VALIDITY_THRESHOLD,
        });
    }
    Ok(det.powf(-(n as f64) / 2.0))
}

fn check_domain(n: usize, q: usize, mu: f64) -> Result<()> {
    if n < 1 {
        return Err(invalid("n must be at least 1"));
    }
    if n > q {
        return Err(Error::Precondition(format!(
            "determinant expansion needs n <= q (got n = {n}, q = {q}); apply reduce_dimension first"
        )));
    }
    if q < 2 {
        return Err(invalid(format!("q must be at least 2, got {q}")));
    }
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(invalid(format!(
            "mu must be non-negative and finite, got {mu}"
        )));
    }
    Ok(())
}

/// `1 - det^(-n/2)` without cancellation for `det` near 1.
fn deficit(what: &str, det: f64, n: usize) -> Result<f64> {
    power(what, det, n)?;
    Ok(-(-(n as f64) / 2.0 * det.ln()).exp_m1())
}

fn closed_deficit(what: &str, form: DetForm, n: usize, q: usize, mu: f64) -> Result<f64> {
    if mu == 0.0 {
        return Ok(0.0);
    }
    deficit(what, det_closed_form(form, q, mu)?, n)
}

/// `Z1 = 1 - q^-1 sum_l det(I + Q_l)^(-n/2) - q^-1 det(I + P)^(-n/2)`.
///
/// All `Q_l` share one determinant. With `g(d) = 1 - d^(-n/2)` the constant
/// cancels and `Z1 = ((q-1)/q) g(I+Q) + g(I+P)/q`.
pub fn z1(n: usize, q: usize, mu: f64) -> Result<f64> {
    check_domain(n, q, mu)?;
    let qf = q as f64;
    let g_q = closed_deficit("det(I+Q)", DetForm::IQ { t: 1, ell: 1 }, n, q, mu)?;
    let g_p = closed_deficit("det(I+P)", DetForm::IP { t: 1 }, n, q, mu)?;
    Ok((qf - 1.0) / qf * g_q + g_p / qf)
}

/// `Z2 = E[Z^2]/2`, with the diagonal `l = l'` of the double sum taken from
/// `det(I + 2 Q_l)` and the rest from `det(I + Q_l + Q_l')`.
///
/// Written with `g(d) = 1 - d^(-n/2)`, the constants `1/2 - 1 + ...` sum to
/// zero and are dropped.
pub fn z2(n: usize, q: usize, mu: f64) -> Result<f64> {
    check_domain(n, q, mu)?;
    let qf = q as f64;
    let inv_q2 = 1.0 / (qf * qf);
    let g = |what, form| closed_deficit(what, form, n, q, mu);
    let g_q = g("det(I+Q)", DetForm::IQ { t: 1, ell: 1 })?;
    let g_p = g("det(I+P)", DetForm::IP { t: 1 })?;
    let g_pq = g("det(I+P+Q)", DetForm::IPQ { ell: 1 })?;
    let g_2q = g("det(I+2Q)", DetForm::IQ { t: 2, ell: 1 })?;
    let g_2p = g("det(I+2P)", DetForm::IP { t: 2 })?;
    let g_qq = if q >= 3 {
        g("det(I+Q+Q')", DetForm::IQQ { ell: 1, ell2: 2 })?
    } else {
        0.0
    };
    Ok((qf - 1.0) / qf * g_q + g_p / qf
        - (qf - 1.0) * inv_q2 * g_pq
        - 0.5 * inv_q2 * ((qf - 1.0) * g_2q + (qf - 1.0) * (qf - 2.0) * g_qq)
        - 0.5 * inv_q2 * g_2p)
}

fn numeric_power(what: &str, terms: &[(f64, &QuadraticFormMatrix)], n: usize) -> Result<f64> {
    power(what, det_numeric_pd(terms, None)?, n)
}

/// `Z1` from factorized determinants of every `Q_l` separately, keeping the
/// constant term as written.
pub fn z1_numeric(n: usize, q: usize, mu: f64) -> Result<f64> {
    check_domain(n, q, mu)?;
    let p = build_p(q, mu)?;
    let qs = (1..q)
        .map(|l| build_q(q, mu, l))
        .collect::<Result<Vec<_>>>()?;
    let qf = q as f64;
    let mut z = 1.0 - numeric_power("det(I+P)", &[(1.0, &p)], n)? / qf;
    for m in &qs {
        z -= numeric_power("det(I+Q)", &[(1.0, m)], n)? / qf;
    }
    Ok(z)
}

/// `Z2` from factorized determinants with the constants as written, looping
/// over all `(l, l')` pairs in the order of `ells` (a permutation of `1..=q-1`).
pub fn z2_numeric_ordered(n: usize, q: usize, mu: f64, ells: &[usize]) -> Result<f64> {
    check_domain(n, q, mu)?;
    let mut sorted = ells.to_vec();
    sorted.sort_unstable();
    if sorted != (1..q).collect::<Vec<_>>() {
        return Err(invalid("ells must be a permutation of 1..=q-1"));
    }
    let p = build_p(q, mu)?;
    let qs = ells
        .iter()
        .map(|&l| build_q(q, mu, l))
        .collect::<Result<Vec<_>>>()?;
    let qf = q as f64;
    let inv_q2 = 1.0 / (qf * qf);
    let mut z = 0.5 - numeric_power("det(I+P)", &[(1.0, &p)], n)? / qf
        + 0.5 * inv_q2 * numeric_power("det(I+2P)", &[(2.0, &p)], n)?;
    for a in &qs {
        z -= numeric_power("det(I+Q)", &[(1.0, a)], n)? / qf;
        z += inv_q2 * numeric_power("det(I+P+Q)", &[(1.0, &p), (1.0, a)], n)?;
        for b in &qs {
            z += 0.5 * inv_q2 * numeric_power("det(I+Q+Q')", &[(1.0, a), (1.0, b)], n)?;
        }
    }
    Ok(z)
}

pub fn z2_numeric(n: usize, q: usize, mu: f64) -> Result<f64> {
    z2_numeric_ordered(n, q, mu, &(1..q).collect::<Vec<_>>())
}

/// Average entropy through order `mu` by the determinant route:
/// `n h_sigma + (n/2) q/(q-1) mu + Z1 + Z2`.
pub fn entropy_det(config: &MixtureConfig) -> Result<EntropyEstimate> {
    config.require_series_domain()?;
    let (n, q, mu) = (config.n, config.q, config.mu);
    let nf = n as f64;
    let value = nf * config.component_entropy_1d()
        + 0.5 * nf * kappa(q) * mu
        + z1(n, q, mu)?
        + z2(n, q, mu)?;
    Ok(EntropyEstimate::exact(value, Method::SeriesDet, Some(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series_brute::entropy_series;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn p_structure() {
        for q in [2, 3, 7] {
            for mu in [1e-3, 0.1, 0.4] {
                let p = build_p(q, mu).unwrap();
                let k = q as f64 / (q as f64 - 1.0);
                assert!((p.entries[(q - 1, q - 1)] * (1.0 + mu * k) - mu * k).abs() < 1e-15);
                for i in 0..q {
                    for j in 0..q {
                        if i < q - 2 || j < q - 2 {
                            assert_eq!(p.entries[(i, j)], 0.0);
                        }
                    }
                }
                assert_eq!(p.entries, p.entries.transpose());
            }
        }
        let p = build_p(3, 0.1).unwrap();
        assert!((det_numeric(&[(1.0, &p)], None).unwrap() - 0.7).abs() < 1e-12);
    }

    #[test]
    fn q_structure() {
        let q2 = build_q(2, 0.3, 1).unwrap();
        assert!(q2.entries.iter().all(|&v| v == 0.0));
        let m = build_q(4, 0.05, 1).unwrap();
        let alpha_sq: f64 = spectral::alpha_vectors(4).iter().map(|a| a[0] * a[0]).sum();
        assert!((m.entries.trace() - 0.05 * alpha_sq).abs() < 1e-15);
        let m = build_q(4, 0.05, 2).unwrap();
        let d = det_numeric(&[(1.0, &m)], None).unwrap();
        let expect = 1.0 - 0.05 * 0.05 * 4.0 * 2.0 / 9.0;
        assert!((d - expect).abs() < 1e-12);
        assert!((m.entries.clone() - m.entries.transpose()).amax() < 1e-14);
        assert!(build_q(4, 0.05, 0).is_err());
        assert!(build_q(4, 0.05, 4).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert!((det_closed_form(DetForm::IP { t: 1 }, 3, 0.1).unwrap() - 0.7).abs() < 1e-15);
        let d = det_closed_form(DetForm::IQQ { ell: 1, ell2: 2 }, 3, 0.2).unwrap();
        assert!((d - 1.2).abs() < 1e-15);
        assert!(det_closed_form(DetForm::IQQ { ell: 2, ell2: 2 }, 5, 0.1).is_err());
        let q = build_q(6, 0.03, 1).unwrap();
        let q4 = build_q(6, 0.03, 4).unwrap();
        let num = det_numeric(&[(1.0, &q), (1.0, &q4)], None).unwrap();
        let closed = det_closed_form(DetForm::IQQ { ell: 1, ell2: 4 }, 6, 0.03).unwrap();
        assert!(rel(num, closed) < 1e-12);
        let p = build_p(5, 0.02).unwrap();
        assert!((det_numeric(&[(2.0, &p)], None).unwrap() - 0.85).abs() < 1e-12);
        assert_eq!(det_numeric(&[], Some(4)).unwrap(), 1.0);
    }

    #[test]
    fn closed_forms_match_factorization() {
        for q in 3..=10 {
            for mu in [1e-3, 1e-2, 0.1] {
                let worst = closed_form_max_error(q, mu, 3).unwrap();
                assert!(worst < 1e-11, "q={q} mu={mu}: {worst}");
            }
        }
        assert!(closed_form_max_error(2, 0.1, 3).is_err());
    }

    #[test]
    fn pd_check_refuses_indefinite() {
        let p = build_p(3, 0.1).unwrap();
        assert!(det_numeric(&[(3.0, &p)], None).unwrap() < 0.0);
        assert!(matches!(
            det_numeric_pd(&[(3.0, &p)], None),
            Err(Error::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn z_terms_vanish_at_zero_mu() {
        for (n, q) in [(1, 2), (2, 3), (4, 4)] {
            assert_eq!(z1(n, q, 0.0).unwrap(), 0.0);
            assert_eq!(z2(n, q, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn z_leading_orders() {
        let (n, q, mu) = (4usize, 4usize, 1e-4);
        let a = z1(n, q, mu).unwrap();
        assert!(rel(a, -4.0 / 3.0 * mu) < 0.02, "{a}");
        let b = z2(n, q, mu).unwrap();
        assert!(rel(b, 2.0 / 12.0 * mu) < 0.02, "{b}");
    }

    #[test]
    fn q2_z1_by_hand() {
        let mu = 0.05;
        let expect = 1.0 - 0.5 - 0.5 * (1.0 - 2.0 * mu * 2.0_f64).powf(-0.5);
        assert!((z1(1, 2, mu).unwrap() - expect).abs() < 1e-15);
        assert!((z1_numeric(1, 2, mu).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn closed_and_numeric_z_agree() {
        for (n, q, mu) in [(2, 3, 0.01), (1, 2, 0.03), (3, 6, 0.02), (4, 4, 0.005)] {
            assert!((z1(n, q, mu).unwrap() - z1_numeric(n, q, mu).unwrap()).abs() < 1e-12);
            assert!((z2(n, q, mu).unwrap() - z2_numeric(n, q, mu).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn z2_is_relabeling_invariant() {
        let base = z2_numeric(3, 6, 0.02).unwrap();
        let perm = z2_numeric_ordered(3, 6, 0.02, &[4, 2, 5, 1, 3]).unwrap();
        assert!((base - perm).abs() < 1e-13);
    }

    #[test]
    fn validity_region_enforced() {
        // det(I + 2P) = 1 - 6 mu q/(q-1) drops below 0.5 at q = 3, mu = 0.1.
        assert!(matches!(z2(2, 3, 0.1), Err(Error::ValidityRegion { .. })));
        assert!(z2(2, 3, 0.01).is_ok());
    }

    #[test]
    fn entropy_det_examples() {
        let c = MixtureConfig::new(3, 3, 1.0, 1e-3).unwrap();
        let det = entropy_det(&c).unwrap().value;
        let brute = entropy_series(&c, 1).unwrap().value;
        assert!((det - brute).abs() <= 10.0 * 1e-6 * 3.0, "{det} vs {brute}");
        let base = 3.0 * c.component_entropy_1d();
        assert!(((det - base) - 1e-3).abs() < 1e-4);
        let c0 = c.with_mu(0.0);
        assert_eq!(entropy_det(&c0).unwrap().value, base);
    }

    #[test]
    fn generic_determinant_reduces_to_closed_forms() {
        let d = generic_determinant(5, 0.02, 1.0, &[(2, 1.0)]).unwrap();
        let c = det_closed_form(DetForm::IPQ { ell: 2 }, 5, 0.02).unwrap();
        assert!(rel(d, c) < 1e-12);
        let d = generic_determinant(5, 0.02, 0.0, &[(1, 1.0), (3, 1.0)]).unwrap();
        let c = det_closed_form(DetForm::IQQ { ell: 1, ell2: 3 }, 5, 0.02).unwrap();
        assert!(rel(d, c) < 1e-12);
    }
}
