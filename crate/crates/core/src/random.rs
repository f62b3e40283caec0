//! Random states, unitaries and Hamiltonians for sampling-based checks.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::density::DensityMatrix;
use crate::linalg::{CMatrix, RMatrix};
use crate::qstate::StateVector;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random pure state.
pub fn random_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> StateVector {
    let amps = (0..1usize << n_qubits).map(|_| gaussian(rng)).collect();
    StateVector::normalized(amps).expect("gaussian vector is nonzero")
}

/// Haar-random unitary via QR with the phase fix on R's diagonal.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(dim, dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        q.column_mut(j).iter_mut().for_each(|z| *z *= phase);
    }
    q
}

/// Full-rank mixed state `G G† / tr(G G†)`.
pub fn random_density<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> DensityMatrix {
    let d = 1usize << n_qubits;
    let g = ginibre(d, d, rng);
    let m = &g * g.adjoint();
    let tr = m.trace();
    let mut m = m / tr;
    // Remove rounding asymmetry so validation sees an exactly Hermitian matrix.
    let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    m.copy_from(&herm);
    DensityMatrix::new(m).expect("Ginibre construction is a valid state")
}

pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(dim, dim, rng);
    (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Random symmetric positive-definite matrix `A Aᵀ + shift·1`.
pub fn random_spd<R: Rng + ?Sized>(n: usize, shift: f64, rng: &mut R) -> RMatrix {
    let a = RMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let m = &a * a.transpose() + RMatrix::identity(n, n) * shift;
    (&m + m.transpose()) * 0.5
}
