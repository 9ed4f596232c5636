//! Closed-form eigenstructure of the coupling matrix
//!
//! ```text
//! C = -J/q + mu e_q e_q^T,    M = I + C,
//! ```
//!
//! where `J` is the all-ones matrix. `C` has eigenvalue 0 with multiplicity
//! `q - 2` (the `alpha` vectors, orthogonal to both `1` and `e_q`) and two
//! further eigenvalues `lambda1 > lambda2` whose eigenvectors have the form
//! `(1, ..., 1, x_j)`.

use nalgebra::{DMatrix, Matrix2};
use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// The two non-trivial eigenvalues of `C` and the quantities derived from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenvalues {
    pub lambda1: f64,
    pub lambda2: f64,
    /// `m_j = lambda_j + 1`, eigenvalues of `M`.
    pub m1: f64,
    pub m2: f64,
    /// Last entry of the unnormalized eigenvector `(1, ..., 1, x_j)`.
    pub x1: f64,
    pub x2: f64,
}

impl Eigenvalues {
    /// `|x_j_hat|^2 = q - 1 + x_j^2`.
    pub fn norms_sq(&self, q: usize) -> (f64, f64) {
        let q1 = q as f64 - 1.0;
        (q1 + self.x1 * self.x1, q1 + self.x2 * self.x2)
    }
}

fn check_q_mu(q: usize, mu: f64) -> Result<()> {
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

fn require_positive_mu(mu: f64, what: &str) -> Result<()> {
    if mu == 0.0 {
        return Err(Error::DegenerateParameter(format!(
            "{what} needs mu > 0 (m2 = 0 makes 1/sqrt(m2) singular)"
        )));
    }
    Ok(())
}

/// Eigenvalues of `C` from the quadratic `lambda^2 + (1 - mu) lambda - mu (1 - 1/q) = 0`.
///
/// The small root is formed through `m1 m2 = mu / q` and `lambda1` through
/// its rationalized form for `mu < 1`, so no subtraction of nearly equal
/// numbers happens as `mu -> 0`.
pub fn eigenvalues(q: usize, mu: f64) -> Result<Eigenvalues> {
    check_q_mu(q, mu)?;
    let qf = q as f64;
    let disc = mu * mu + (2.0 - 4.0 / qf) * mu + 1.0;
    assert!(
        disc > 0.0,
        "discriminant {disc} must be positive for mu >= 0, q >= 2"
    );
    let root = disc.sqrt();
    let (lambda1, m1) = if mu < 1.0 {
        let l1 = 2.0 * mu * (1.0 - 1.0 / qf) / (root + 1.0 - mu);
        (l1, 1.0 + l1)
    } else {
        let m1 = 0.5 * ((mu + 1.0) + root);
        (m1 - 1.0, m1)
    };
    let m2 = (mu / qf) / m1;
    Ok(Eigenvalues {
        lambda1,
        lambda2: m2 - 1.0,
        m1,
        m2,
        x1: 1.0 - qf * m1,
        x2: 1.0 - qf * m2,
    })
}

/// The `q - 2` orthonormal null vectors of `C`; `alpha_i` (1-based) has
/// entries `1/sqrt(i(i+1))` in positions `1..=i`, `-i/sqrt(i(i+1))` in
/// position `i + 1`, and zeros after.
pub fn alpha_vectors(q: usize) -> Vec<Vec<f64>> {
    (1..q.saturating_sub(1))
        .map(|i| {
            let scale = 1.0 / ((i * (i + 1)) as f64).sqrt();
            let mut v = vec![0.0; q];
            v[..i].iter_mut().for_each(|e| *e = scale);
            v[i] = -(i as f64) * scale;
            v
        })
        .collect()
}

/// `sum_l (sum_m alpha_{m,l}^2)^2`, summed numerically over the alpha vectors.
pub fn alpha_quartic_sum(q: usize) -> f64 {
    let alphas = alpha_vectors(q);
    (0..q)
        .map(|l| {
            let s: f64 = alphas.iter().map(|a| a[l] * a[l]).sum();
            s * s
        })
        .sum()
}

/// The explicit `q x q` matrix `C`.
pub fn coupling_matrix(q: usize, mu: f64) -> DMatrix<f64> {
    let mut c = DMatrix::from_element(q, q, -1.0 / q as f64);
    c[(q - 1, q - 1)] += mu;
    c
}

/// `M = I + C`.
pub fn shifted_coupling_matrix(q: usize, mu: f64) -> DMatrix<f64> {
    coupling_matrix(q, mu) + DMatrix::identity(q, q)
}

/// Eigenvalues together with the orthogonal basis `Lambda`, whose columns are
/// `(alpha_1, ..., alpha_{q-2}, beta_1, beta_2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub q: usize,
    pub mu: f64,
    pub values: Eigenvalues,
    pub basis: DMatrix<f64>,
}

impl SpectralDecomposition {
    /// `diag(0, ..., 0, lambda1, lambda2)`.
    pub fn c_diagonal(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.q, self.q);
        d[(self.q - 2, self.q - 2)] = self.values.lambda1;
        d[(self.q - 1, self.q - 1)] = self.values.lambda2;
        d
    }

    /// `diag(1, ..., 1, m1, m2)`.
    pub fn m_diagonal(&self) -> DMatrix<f64> {
        self.c_diagonal() + DMatrix::identity(self.q, self.q)
    }

    /// `max |Lambda^T Lambda - I|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let g = self.basis.transpose() * &self.basis - DMatrix::identity(self.q, self.q);
        g.amax()
    }

    /// `max |Lambda^T C Lambda - diag(0, ..., lambda1, lambda2)|`.
    pub fn c_residual(&self) -> f64 {
        let d = self.basis.transpose() * coupling_matrix(self.q, self.mu) * &self.basis;
        (d - self.c_diagonal()).amax()
    }

    /// `max |Lambda^T M Lambda - diag(1, ..., m1, m2)|`.
    pub fn m_residual(&self) -> f64 {
        let d = self.basis.transpose() * shifted_coupling_matrix(self.q, self.mu) * &self.basis;
        (d - self.m_diagonal()).amax()
    }
}

pub fn eigenbasis(q: usize, mu: f64) -> Result<SpectralDecomposition> {
    check_q_mu(q, mu)?;
    require_positive_mu(mu, "eigenbasis")?;
    let values = eigenvalues(q, mu)?;
    let mut basis = DMatrix::zeros(q, q);
    for (i, a) in alpha_vectors(q).into_iter().enumerate() {
        basis.set_column(i, &nalgebra::DVector::from_vec(a));
    }
    let (n1, n2) = values.norms_sq(q);
    for (col, x, norm_sq) in [(q - 2, values.x1, n1), (q - 1, values.x2, n2)] {
        let inv = 1.0 / norm_sq.sqrt();
        for k in 0..q - 1 {
            basis[(k, col)] = inv;
        }
        basis[(q - 1, col)] = x * inv;
    }
    Ok(SpectralDecomposition {
        q,
        mu,
        values,
        basis,
    })
}

/// Residuals `lhs - rhs` of the eight algebraic identities between `m_j`,
/// `x_j`, `mu` and `q`, in a fixed order. The last one, whose right side is
/// `1/mu`, is multiplied through by `mu`.
pub fn identity_residuals(q: usize, mu: f64) -> Result<[f64; 8]> {
    check_q_mu(q, mu)?;
    require_positive_mu(mu, "identity_suite")?;
    let e = eigenvalues(q, mu)?;
    let qf = q as f64;
    let (n1, n2) = e.norms_sq(q);
    // x^2 - 1 = (x - 1)(x + 1) with x - 1 = -q m.
    let x1_sq_less_1 = -qf * e.m1 * (e.x1 + 1.0);
    let x2_sq_less_1 = -qf * e.m2 * (e.x2 + 1.0);
    Ok([
        e.m1 * e.m2 - mu / qf,
        e.m1 + e.m2 - (mu + 1.0),
        e.x1 + e.x2 - (-qf * (mu + 1.0) + 2.0),
        e.x1 * e.x2 - (1.0 - qf),
        (mu / e.m1) / n1 + (mu / e.m2) / n2 - (1.0 + mu * qf / (qf - 1.0)),
        (x1_sq_less_1 / e.m1) / n1 + (x2_sq_less_1 / e.m2) / n2 - qf / (1.0 - qf),
        (x1_sq_less_1 * x2_sq_less_1 - qf * qf) / (n1 * n2) - 1.0 / (1.0 - qf),
        mu * ((e.x1 / e.m1) / n1 + (e.x2 / e.m2) / n2) - 1.0,
    ])
}

/// Largest absolute residual of [`identity_residuals`].
pub fn identity_suite(q: usize, mu: f64) -> Result<f64> {
    Ok(identity_residuals(q, mu)?
        .iter()
        .fold(0.0, |m, r| m.max(r.abs())))
}

/// The 2x2 matrix mixing the two non-trivial eigen-directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingMatrix {
    pub w: Matrix2<f64>,
}

impl MixingMatrix {
    pub fn det(&self) -> f64 {
        self.w.determinant()
    }

    /// `max |W^T W - I|`.
    pub fn orthogonality_residual(&self) -> f64 {
        (self.w.transpose() * self.w - Matrix2::identity()).amax()
    }
}

pub fn mixing_matrix(q: usize, mu: f64) -> Result<MixingMatrix> {
    check_q_mu(q, mu)?;
    require_positive_mu(mu, "mixing_matrix")?;
    let e = eigenvalues(q, mu)?;
    let (n1, n2) = e.norms_sq(q);
    let c = 1.0 / (1.0 / mu + q as f64 / (q as f64 - 1.0)).sqrt();
    let a = c / (e.m2.sqrt() * n2.sqrt());
    let b = c / (e.m1.sqrt() * n1.sqrt());
    Ok(MixingMatrix {
        w: Matrix2::new(a, b, b, -a),
    })
}
