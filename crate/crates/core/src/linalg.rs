//! Dense symmetric linear algebra: spectra, Moore–Penrose pseudoinverse,
//! pseudo-determinant and linear solves.
//!
//! Everything is dense. The invariants that need these kernels are only
//! evaluated on graphs of at most a few hundred vertices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;
/// Default relative rank tolerance, multiplied by the spectral radius.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Square symmetric matrix, symmetrized as `(M + Mᵀ) / 2` on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl SymMatrix {
    pub fn new(m: DMatrix<f64>) -> Self {
        assert!(m.is_square(), "SymMatrix must be square");
        let t = m.transpose();
        Self((m + t) * 0.5)
    }

    pub fn identity(order: usize) -> Self {
        Self(DMatrix::identity(order, order))
    }

    pub fn zeros(order: usize) -> Self {
        Self(DMatrix::zeros(order, order))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }
}

/// Eigenvalues in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Absolute cut-off below which an eigenvalue counts as zero.
    pub fn default_rank_tol(&self) -> f64 {
        DEFAULT_RANK_TOL * self.spectral_radius()
    }
}

fn decompose(m: &SymMatrix) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    if m.order() == 0 {
        return Ok(SymmetricEigen {
            eigenvectors: DMatrix::zeros(0, 0),
            eigenvalues: DVector::zeros(0),
        });
    }
    m.0.clone()
        .try_symmetric_eigen(EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or(Error::NoConvergence { order: m.order() })
}

fn sorted(values: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.into_iter().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenvalues only, ascending; skips accumulating eigenvectors.
pub fn eigenvalues_sym(m: &SymMatrix) -> Result<Spectrum> {
    if m.order() == 0 {
        return Ok(Spectrum(Vec::new()));
    }
    if m.0.iter().any(|x| !x.is_finite()) {
        return Err(Error::NoConvergence { order: m.order() });
    }
    Ok(Spectrum(sorted(m.0.symmetric_eigenvalues().iter().copied())))
}

fn resolve_tol(rank_tol: Option<f64>, spectrum: &Spectrum) -> Result<f64> {
    match rank_tol {
        Some(t) if t > 0.0 => Ok(t),
        Some(t) => Err(Error::Config(format!("rank_tol must be positive, got {t}"))),
        None => Ok(spectrum.default_rank_tol()),
    }
}

/// Moore–Penrose pseudoinverse. Eigenvalues with `|λ| ≤ rank_tol` map to 0,
/// the rest to `1/λ`, in the original eigenbasis. `None` selects the
/// default tolerance `1e-10 · spectral radius`.
pub fn pseudoinverse(m: &SymMatrix, rank_tol: Option<f64>) -> Result<SymMatrix> {
    let eig = decompose(m)?;
    let spectrum = Spectrum(eig.eigenvalues.iter().copied().collect());
    let tol = resolve_tol(rank_tol, &spectrum)?;
    let inv = eig
        .eigenvalues
        .map(|l| if l.abs() <= tol { 0.0 } else { 1.0 / l });
    let q = &eig.eigenvectors;
    let out = q * DMatrix::from_diagonal(&inv) * q.transpose();
    Ok(SymMatrix::new(out))
}

/// Natural log of the pseudo-determinant, i.e. `Σ log|λ|` over eigenvalues
/// above tolerance, together with the sign of the product. The empty
/// product gives `(0.0, 1.0)`.
pub fn log_pseudo_determinant(m: &SymMatrix, rank_tol: Option<f64>) -> Result<(f64, f64)> {
    let spectrum = eigenvalues_sym(m)?;
    let tol = resolve_tol(rank_tol, &spectrum)?;
    let mut log = 0.0;
    let mut sign = 1.0;
    for &l in spectrum.values() {
        if l.abs() > tol {
            log += l.abs().ln();
            if l < 0.0 {
                sign = -sign;
            }
        }
    }
    Ok((log, sign))
}

/// Product of the eigenvalues with `|λ| > rank_tol`; 1 for the zero matrix.
pub fn pseudo_determinant(m: &SymMatrix, rank_tol: Option<f64>) -> Result<f64> {
    let (log, sign) = log_pseudo_determinant(m, rank_tol)?;
    Ok(sign * log.exp())
}

/// Solves `m · x = rhs` by LU with partial pivoting. Fails with
/// [`Error::Singular`] when the factorization breaks down or the residual
/// exceeds `1e-8 · ‖rhs‖`.
pub fn solve_linear(m: &SymMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    let order = m.order();
    if rhs.len() != order {
        return Err(Error::Schema(format!(
            "right-hand side has length {}, matrix order is {order}",
            rhs.len()
        )));
    }
    let b = DVector::from_column_slice(rhs);
    let x = m
        .0
        .clone()
        .lu()
        .solve(&b)
        .ok_or(Error::Singular { order })?;
    let residual = (&m.0 * &x - &b).norm();
    if !x.iter().all(|v| v.is_finite()) || residual > 1e-8 * b.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::Singular { order });
    }
    Ok(x.iter().copied().collect())
}
