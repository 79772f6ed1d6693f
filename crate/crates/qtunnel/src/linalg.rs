//! Small dense complex linear algebra helpers shared across modules.
//!
//! Everything here operates on `nalgebra::DMatrix<Complex64>`. Matrices in
//! this crate are verification back-ends; the evolution hot path never
//! multiplies dense 2^n x 2^n operators.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix used by the verification paths.
pub type CMatrix = DMatrix<Complex64>;

/// Qubit count above which dense 2^n x 2^n operators are refused.
pub const MAX_DENSE_QUBITS: usize = 12;

pub(crate) fn check_dense_cap(n_qubits: usize, what: &'static str) -> Result<()> {
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::CapacityExceeded {
            n_qubits,
            max: MAX_DENSE_QUBITS,
            what,
        });
    }
    Ok(())
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest deviation of `u^† u` from the identity.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let dim = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &identity(dim))
}

/// Largest deviation of `h` from its own adjoint.
pub fn hermiticity_defect(h: &CMatrix) -> f64 {
    max_abs_diff(h, &h.adjoint())
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues plus the
/// unitary of column eigenvectors.
pub fn eigh(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch {
            left: h.nrows(),
            right: h.ncols(),
        });
    }
    let eig = nalgebra::SymmetricEigen::new(h.clone());
    Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
}

/// `exp(-i h t)` for Hermitian `h`, via eigendecomposition.
pub fn expm_minus_i_hermitian(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let (vals, vecs) = eigh(h)?;
    let dim = h.nrows();
    let mut scaled = vecs.clone();
    for (k, lambda) in vals.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -lambda * t);
        for r in 0..dim {
            scaled[(r, k)] *= phase;
        }
    }
    Ok(scaled * vecs.adjoint())
}

/// Hermitian square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[-neg_tol, 0)` are clamped to zero; anything lower is a
/// domain error.
pub fn sqrtm_psd(h: &CMatrix, neg_tol: f64) -> Result<CMatrix> {
    let (vals, vecs) = eigh(h)?;
    let min_eig = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eig < -neg_tol {
        return Err(Error::NotPositiveSemidefinite { min_eig });
    }
    let dim = h.nrows();
    let mut scaled = vecs.clone();
    for (k, lambda) in vals.iter().enumerate() {
        let root = Complex64::new(lambda.max(0.0).sqrt(), 0.0);
        for r in 0..dim {
            scaled[(r, k)] *= root;
        }
    }
    Ok(scaled * vecs.adjoint())
}
