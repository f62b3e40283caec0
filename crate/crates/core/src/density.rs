//! Density matrices, partial traces and entanglement measures.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_defect, xlogx, CMatrix, ZERO};
use crate::qstate::{BlochVector, StateVector};

/// Eigenvalues in `[-CLAMP_WINDOW, 0)` are treated as zero.
pub const CLAMP_WINDOW: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityJson", into = "DensityJson")]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: CMatrix,
}

#[derive(Serialize, Deserialize)]
struct DensityJson {
    dimension: usize,
    entries: Vec<(f64, f64)>,
}

impl From<DensityMatrix> for DensityJson {
    fn from(rho: DensityMatrix) -> Self {
        let d = rho.dim();
        let mut entries = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                let z = rho.matrix[(r, c)];
                entries.push((z.re, z.im));
            }
        }
        Self {
            dimension: d,
            entries,
        }
    }
}

impl TryFrom<DensityJson> for DensityMatrix {
    type Error = Error;

    fn try_from(j: DensityJson) -> Result<Self> {
        if j.entries.len() != j.dimension * j.dimension {
            return Err(Error::DimensionMismatch {
                expected: j.dimension * j.dimension,
                got: j.entries.len(),
            });
        }
        let m = CMatrix::from_row_iterator(
            j.dimension,
            j.dimension,
            j.entries.iter().map(|&(re, im)| Complex64::new(re, im)),
        );
        DensityMatrix::new(m)
    }
}

/// Spectrum-derived summary of a density matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    pub entropy_bits: f64,
    pub purity: f64,
    pub eigenvalues: Vec<f64>,
}

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch {
            expected: dim.next_power_of_two().max(1),
            got: dim,
        });
    }
    Ok(dim.trailing_zeros() as usize)
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        let n_qubits = qubits_for_dim(matrix.nrows())?;
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne(tr));
        }
        let rho = Self { n_qubits, matrix };
        let min = rho.raw_eigenvalues()[0];
        if min < -CLAMP_WINDOW {
            return Err(Error::NotPositive(min));
        }
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        let n_qubits = matrix.nrows().trailing_zeros() as usize;
        Self { n_qubits, matrix }
    }

    /// `|ψ><ψ|`.
    pub fn from_statevector(state: &StateVector) -> Self {
        let v = crate::linalg::CVector::from_column_slice(state.amplitudes());
        Self {
            n_qubits: state.n_qubits(),
            matrix: &v * v.adjoint(),
        }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1usize << n_qubits;
        Self {
            n_qubits,
            matrix: CMatrix::identity(d, d) / Complex64::new(d as f64, 0.0),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self {
            n_qubits: self.n_qubits + other.n_qubits,
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: u.nrows(),
            });
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            matrix: u * &self.matrix * u.adjoint(),
        })
    }

    /// Reduced state on `keep`; qubit `i` of the result is `keep[i]`.
    /// An empty `keep` yields the 1×1 matrix holding the trace.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let n = self.n_qubits;
        for (i, &q) in keep.iter().enumerate() {
            if q >= n {
                return Err(Error::IndexOutOfRange {
                    index: q,
                    n_qubits: n,
                });
            }
            if keep[..i].contains(&q) {
                return Err(Error::DuplicateTarget(q));
            }
        }
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let bit = |q: usize| 1usize << (n - 1 - q);

        let spread = |local: usize, qubits: &[usize]| -> usize {
            let k = qubits.len();
            qubits
                .iter()
                .enumerate()
                .filter(|(j, _)| (local >> (k - 1 - j)) & 1 == 1)
                .map(|(_, &q)| bit(q))
                .sum()
        };
        let keep_full: Vec<usize> = (0..1usize << keep.len()).map(|a| spread(a, keep)).collect();
        let env_full: Vec<usize> = (0..1usize << traced.len())
            .map(|e| spread(e, &traced))
            .collect();

        let dk = keep_full.len();
        let mut out = CMatrix::from_element(dk, dk, ZERO);
        for (a, &ia) in keep_full.iter().enumerate() {
            for (b, &ib) in keep_full.iter().enumerate() {
                let mut acc = ZERO;
                for &e in &env_full {
                    acc += self.matrix[(ia | e, ib | e)];
                }
                out[(a, b)] = acc;
            }
        }
        Ok(Self {
            n_qubits: keep.len(),
            matrix: out,
        })
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ.
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    fn raw_eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Ascending eigenvalues with the small-negative window clamped to 0.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.raw_eigenvalues()
            .into_iter()
            .map(|l| {
                if l >= 0.0 {
                    Ok(l)
                } else if l >= -CLAMP_WINDOW {
                    Ok(0.0)
                } else {
                    Err(Error::NotPositive(l))
                }
            })
            .collect()
    }

    pub fn von_neumann_entropy(&self) -> Result<EntropyReport> {
        let eigenvalues = self.eigenvalues()?;
        let entropy_bits = -eigenvalues.iter().map(|&l| xlogx(l, f64::log2)).sum::<f64>();
        Ok(EntropyReport {
            entropy_bits: entropy_bits.max(0.0),
            purity: eigenvalues.iter().map(|l| l * l).sum(),
            eigenvalues,
        })
    }

    /// Entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        Ok(self.von_neumann_entropy()?.entropy_bits)
    }

    pub fn bloch_vector(&self, qubit: usize) -> Result<BlochVector> {
        let r = self.partial_trace(&[qubit])?.matrix;
        Ok(BlochVector::from_qubit_density(&[
            [r[(0, 0)], r[(0, 1)]],
            [r[(1, 0)], r[(1, 1)]],
        ]))
    }
}

/// `S_A + S_B − S_AB` for the bipartition `part_a | complement`.
pub fn mutual_information(rho: &DensityMatrix, part_a: &[usize]) -> Result<f64> {
    let n = rho.n_qubits();
    if part_a.is_empty() || part_a.len() >= n {
        return Err(Error::InvalidArgument(
            "partition must be a nonempty proper subset".into(),
        ));
    }
    let part_b: Vec<usize> = (0..n).filter(|q| !part_a.contains(q)).collect();
    let s_a = rho.partial_trace(part_a)?.entropy()?;
    let s_b = rho.partial_trace(&part_b)?.entropy()?;
    let s_ab = rho.entropy()?;
    Ok(s_a + s_b - s_ab)
}

/// Geometry of a single-qubit state inside the Bloch ball.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlochBall {
    pub bloch: BlochVector,
    pub radius: f64,
    pub determinant: f64,
    pub entropy_bits: f64,
}

/// Entropy of a qubit whose Bloch vector has length `r`.
pub fn entropy_from_radius(r: f64) -> f64 {
    let p = (1.0 + r) / 2.0;
    let q = (1.0 - r) / 2.0;
    (-(xlogx(p, f64::log2) + xlogx(q, f64::log2))).max(0.0)
}

pub fn bloch_ball_analysis(rho: &DensityMatrix) -> Result<BlochBall> {
    if rho.n_qubits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: rho.dim(),
        });
    }
    let bloch = rho.bloch_vector(0)?;
    let m = rho.matrix();
    let determinant = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re;
    let radius = bloch.radius();
    Ok(BlochBall {
        bloch,
        radius,
        determinant,
        entropy_bits: entropy_from_radius(radius.min(1.0)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cmatrix, max_abs_diff};
    use crate::qstate::experiments::{bell_basis_rotation, Direction};
    use crate::random::{random_density, random_state};
    use crate::rng::seeded_rng;

    fn bell() -> DensityMatrix {
        let s = bell_basis_rotation(&StateVector::zero(2), 0, 1, Direction::Forward).unwrap();
        DensityMatrix::from_statevector(&s)
    }

    #[test]
    fn projector_of_zero() {
        let rho = DensityMatrix::from_statevector(&StateVector::zero(1));
        assert_eq!(
            rho.matrix(),
            &cmatrix(2, 2, &[(1., 0.), (0., 0.), (0., 0.), (0., 0.)])
        );
    }

    #[test]
    fn bell_density_corners() {
        let m = bell().matrix().clone();
        for r in 0..4 {
            for c in 0..4 {
                let corner = (r == 0 || r == 3) && (c == 0 || c == 3);
                let expected = if corner { 0.5 } else { 0.0 };
                assert!((m[(r, c)].re - expected).abs() < 1e-15);
                assert!(m[(r, c)].im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn bell_reduced_state() {
        let a = bell().partial_trace(&[0]).unwrap();
        assert!(max_abs_diff(a.matrix(), &(CMatrix::identity(2, 2) * Complex64::new(0.5, 0.0))) < 1e-15);
        let rep = a.von_neumann_entropy().unwrap();
        assert!((rep.purity - 0.5).abs() < 1e-12);
        assert!((rep.entropy_bits - 1.0).abs() < 1e-12);
        assert!((mutual_information(&bell(), &[0]).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn product_factorization() {
        let mut rng = seeded_rng(3);
        let a = random_density(1, &mut rng);
        let b = random_density(2, &mut rng);
        let ab = a.tensor(&b);
        assert!(max_abs_diff(ab.partial_trace(&[0]).unwrap().matrix(), a.matrix()) < 1e-14);
        assert!(max_abs_diff(ab.partial_trace(&[1, 2]).unwrap().matrix(), b.matrix()) < 1e-14);
    }

    #[test]
    fn keep_order_permutes_qubits() {
        let mut rng = seeded_rng(4);
        let a = random_density(1, &mut rng);
        let b = random_density(1, &mut rng);
        let ab = a.tensor(&b);
        let ba = ab.partial_trace(&[1, 0]).unwrap();
        assert!(max_abs_diff(ba.matrix(), b.tensor(&a).matrix()) < 1e-14);
    }

    #[test]
    fn empty_and_full_keep() {
        let mut rng = seeded_rng(5);
        let rho = random_density(2, &mut rng);
        let scalar = rho.partial_trace(&[]).unwrap();
        assert_eq!(scalar.dim(), 1);
        assert!((scalar.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
        assert_eq!(rho.partial_trace(&[0, 1]).unwrap().matrix(), rho.matrix());
        assert!(rho.partial_trace(&[2]).is_err());
        assert!(rho.partial_trace(&[0, 0]).is_err());
    }

    // Entry-by-entry index-pattern oracle for ρ_A = tr_{BC} ρ on three qubits.
    #[test]
    fn three_qubit_pattern() {
        let mut rng = seeded_rng(6);
        let psi = random_state(3, &mut rng);
        let rho = DensityMatrix::from_statevector(&psi);
        let m = rho.matrix();
        let reduced = rho.partial_trace(&[0]).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let expected = m[(4 * a, 4 * b)]
                    + m[(4 * a + 1, 4 * b + 1)]
                    + m[(4 * a + 2, 4 * b + 2)]
                    + m[(4 * a + 3, 4 * b + 3)];
                assert!((reduced.matrix()[(a, b)] - expected).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn alpha_family_entropy() {
        let alpha: f64 = 0.4;
        let (c, s) = (alpha.cos(), alpha.sin());
        let psi = StateVector::from_amplitudes(vec![
            Complex64::new(c, 0.0),
            ZERO,
            ZERO,
            Complex64::new(s, 0.0),
        ])
        .unwrap();
        let e = DensityMatrix::from_statevector(&psi)
            .partial_trace(&[0])
            .unwrap()
            .entropy()
            .unwrap();
        let (c2, s2) = (c * c, s * s);
        let expected = -(c2 * c2.log2() + s2 * s2.log2());
        assert!((e - expected).abs() < 1e-12);
    }

    #[test]
    fn bloch_ball() {
        let r = bloch_ball_analysis(&DensityMatrix::maximally_mixed(1)).unwrap();
        assert!((r.entropy_bits - 1.0).abs() < 1e-15);
        assert!(r.radius < 1e-15);
        let pure = DensityMatrix::from_statevector(&StateVector::zero(1));
        assert_eq!(bloch_ball_analysis(&pure).unwrap().entropy_bits, 0.0);
        let mut rng = seeded_rng(8);
        for _ in 0..20 {
            let rho = random_density(1, &mut rng);
            let ball = bloch_ball_analysis(&rho).unwrap();
            assert!((ball.determinant - (1.0 - ball.radius.powi(2)) / 4.0).abs() < 1e-12);
            assert!((ball.entropy_bits - rho.entropy().unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn validation() {
        let not_herm = cmatrix(2, 2, &[(0.5, 0.), (0.1, 0.), (0.0, 0.), (0.5, 0.)]);
        assert!(matches!(DensityMatrix::new(not_herm), Err(Error::NotHermitian(_))));
        let bad_trace = cmatrix(2, 2, &[(0.5, 0.), (0., 0.), (0., 0.), (0.6, 0.)]);
        assert!(matches!(DensityMatrix::new(bad_trace), Err(Error::TraceNotOne(_))));
        let negative = cmatrix(2, 2, &[(1.5, 0.), (0., 0.), (0., 0.), (-0.5, 0.)]);
        assert!(matches!(DensityMatrix::new(negative), Err(Error::NotPositive(_))));
    }

    #[test]
    fn json_round_trip() {
        let rho = bell();
        let text = serde_json::to_string(&rho).unwrap();
        assert!(text.starts_with("{\"dimension\":4,\"entries\":[[0.5"));
        let back: DensityMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rho);
    }
}
