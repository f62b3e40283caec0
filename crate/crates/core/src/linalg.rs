//! Small dense linear-algebra helpers shared by the simulation modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type RMatrix = DMatrix<f64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Builds a complex matrix from row-major `(re, im)` pairs.
pub fn cmatrix(rows: usize, cols: usize, entries: &[(f64, f64)]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols);
    CMatrix::from_row_iterator(
        rows,
        cols,
        entries.iter().map(|&(re, im)| Complex64::new(re, im)),
    )
}

/// Kronecker product of a list of factors, leftmost factor most significant.
pub fn kron_all(factors: &[CMatrix]) -> CMatrix {
    let mut acc = CMatrix::from_element(1, 1, ONE);
    for f in factors {
        acc = acc.kronecker(f);
    }
    acc
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff_real(a: &RMatrix, b: &RMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Max deviation from Hermiticity, `max |A - A†|`.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

/// `max |U U† - 1|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    max_abs_diff(&(u * u.adjoint()), &CMatrix::identity(n, n))
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted ascending.
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Columns are the eigenvectors, in the order of `values`.
    pub vectors: CMatrix,
}

pub fn hermitian_eigen(a: &CMatrix) -> HermitianEigen {
    let eig = SymmetricEigen::new(a.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let n = a.nrows();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    HermitianEigen {
        values: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        vectors,
    }
}

/// Eigenvalues only, sorted ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Real symmetric eigen-decomposition, ascending.
pub struct SymEigen {
    pub values: Vec<f64>,
    pub vectors: RMatrix,
}

pub fn symmetric_eigen(a: &RMatrix) -> SymEigen {
    let eig = SymmetricEigen::new(a.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let n = a.nrows();
    let mut vectors = RMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    SymEigen {
        values: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        vectors,
    }
}

pub fn symmetric_eigenvalues(a: &RMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

impl SymEigen {
    /// `V f(Λ) Vᵀ`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> RMatrix {
        let mut scaled = self.vectors.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let s = f(lam);
            scaled.column_mut(j).scale_mut(s);
        }
        &scaled * self.vectors.transpose()
    }
}

/// Unitary propagator `exp(-i H t)` assembled from a Hermitian eigen-decomposition.
pub fn propagator_from_eigen(eig: &HermitianEigen, t: f64) -> CMatrix {
    let n = eig.vectors.nrows();
    if t == 0.0 {
        return CMatrix::identity(n, n);
    }
    let mut scaled = eig.vectors.clone();
    for (j, &e) in eig.values.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -e * t);
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    &scaled * eig.vectors.adjoint()
}

/// Checks that a real symmetric matrix is positive definite via Cholesky.
pub fn require_positive_definite(a: &RMatrix) -> Result<()> {
    if a.clone().cholesky().is_some() {
        Ok(())
    } else {
        Err(Error::NotPositiveDefinite)
    }
}

/// `x log x` in the requested base with the `0 log 0 = 0` convention.
pub fn xlogx(x: f64, log: fn(f64) -> f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * log(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_identities_is_identity() {
        let id = CMatrix::identity(2, 2);
        let k = kron_all(&[id.clone(), id.clone(), id]);
        assert_eq!(max_abs_diff(&k, &CMatrix::identity(8, 8)), 0.0);
    }

    #[test]
    fn propagator_at_zero_is_exact_identity() {
        let h = cmatrix(2, 2, &[(1.0, 0.0), (0.5, -0.2), (0.5, 0.2), (-0.3, 0.0)]);
        let eig = hermitian_eigen(&h);
        let u = propagator_from_eigen(&eig, 0.0);
        assert_eq!(u, CMatrix::identity(2, 2));
        let u = propagator_from_eigen(&eig, 1.7);
        assert!(unitarity_defect(&u) < 1e-13);
    }

    #[test]
    fn eigenvalues_sorted() {
        let a = RMatrix::from_row_slice(3, 3, &[3.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, -1.0]);
        let e = symmetric_eigen(&a);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let back = e.apply_fn(|x| x);
        assert!(max_abs_diff_real(&back, &a) < 1e-13);
    }
}
