//! Hamiltonians as operator strings, exact time evolution, the decoherence
//! models and Kraus operators extracted from a joint unitary.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{
    cmatrix, hermitian_eigen, hermiticity_defect, kron_all, propagator_from_eigen, CMatrix,
    CVector, HermitianEigen, ZERO,
};
use crate::qstate::experiments::swap_circuit;
use crate::qstate::{run_circuit, ExperimentRecord, StateVector};

const HERMITIAN_TOL: f64 = 1e-12;

/// Single-qubit factor of an operator string. `Plus = [[0,1],[0,0]]`,
/// `Minus = [[0,0],[1,0]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliSymbol {
    I,
    X,
    Y,
    Z,
    Plus,
    Minus,
}

impl PauliSymbol {
    pub fn matrix(self) -> CMatrix {
        let e = |v: [(f64, f64); 4]| cmatrix(2, 2, &v);
        let o = (0.0, 0.0);
        let l = (1.0, 0.0);
        match self {
            PauliSymbol::I => e([l, o, o, l]),
            PauliSymbol::X => e([o, l, l, o]),
            PauliSymbol::Y => e([o, (0.0, -1.0), (0.0, 1.0), o]),
            PauliSymbol::Z => e([l, o, o, (-1.0, 0.0)]),
            PauliSymbol::Plus => e([o, l, o, o]),
            PauliSymbol::Minus => e([o, o, l, o]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorString {
    pub factors: Vec<PauliSymbol>,
    pub coefficient: Complex64,
}

impl OperatorString {
    pub fn dense(&self) -> CMatrix {
        let m: Vec<CMatrix> = self.factors.iter().map(|f| f.matrix()).collect();
        kron_all(&m) * self.coefficient
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianSpec {
    pub n_qubits: usize,
    pub terms: Vec<OperatorString>,
}

impl HamiltonianSpec {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(n_qubits: usize, terms: Vec<OperatorString>) -> Result<Self> {
        for t in &terms {
            if t.factors.len() != n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: n_qubits,
                    got: t.factors.len(),
                });
            }
        }
        Ok(Self { n_qubits, terms })
    }

    /// Adds `coefficient · ⊗ factors`, with identity on unlisted qubits.
    pub fn term(mut self, coefficient: f64, factors: &[(usize, PauliSymbol)]) -> Self {
        let mut f = vec![PauliSymbol::I; self.n_qubits];
        for &(q, s) in factors {
            f[q] = s;
        }
        self.terms.push(OperatorString {
            factors: f,
            coefficient: Complex64::new(coefficient, 0.0),
        });
        self
    }

    /// Adds `coefficient (σ⁺_a σ⁻_b + σ⁻_a σ⁺_b)`.
    pub fn exchange(self, coefficient: f64, a: usize, b: usize) -> Self {
        use PauliSymbol::{Minus, Plus};
        self.term(coefficient, &[(a, Plus), (b, Minus)])
            .term(coefficient, &[(a, Minus), (b, Plus)])
    }

    /// Dense matrix of the sum, checked Hermitian to 1e-12.
    pub fn dense(&self) -> Result<CMatrix> {
        let d = 1usize << self.n_qubits;
        let mut h = CMatrix::from_element(d, d, ZERO);
        for t in &self.terms {
            if t.factors.len() != self.n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: self.n_qubits,
                    got: t.factors.len(),
                });
            }
            h += t.dense();
        }
        let defect = hermiticity_defect(&h);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(h)
    }
}

/// Two-qubit atom–photon model truncated to one photon:
/// `H = −(c1 σᶻ⊗1 + c2 (σ⁺⊗σ⁻ + σ⁻⊗σ⁺))`, system on qubit 0.
pub fn rabi_model(c1: f64, c2: f64) -> HamiltonianSpec {
    HamiltonianSpec::new(2)
        .term(-c1, &[(0, PauliSymbol::Z)])
        .exchange(-c2, 0, 1)
}

/// `H = −(c11 σᶻ⊗1 + c22 1⊗σᶻ + c12 (σ⁺σ⁻ + σ⁻σ⁺))`.
pub fn two_qubit_model(c11: f64, c22: f64, c12: f64) -> HamiltonianSpec {
    HamiltonianSpec::new(2)
        .term(-c11, &[(0, PauliSymbol::Z)])
        .term(-c22, &[(1, PauliSymbol::Z)])
        .exchange(-c12, 0, 1)
}

/// Couplings `(c11, c22, c33, c12, c13)` of the default three-qubit run.
pub const DECOHERENCE_COUPLINGS: [f64; 5] = [0.9, 0.3, 0.4, 0.5, 0.4];

/// System qubit 0 coupled to two environment qubits.
pub fn three_qubit_model(c: [f64; 5]) -> HamiltonianSpec {
    let [c11, c22, c33, c12, c13] = c;
    HamiltonianSpec::new(3)
        .term(-c11, &[(0, PauliSymbol::Z)])
        .term(-c22, &[(1, PauliSymbol::Z)])
        .term(-c33, &[(2, PauliSymbol::Z)])
        .exchange(-c12, 0, 1)
        .exchange(-c13, 0, 2)
}

/// `|+>|0>|1>`: system in the Hadamard state, environment in `|01>`.
pub fn decoherence_initial_state() -> StateVector {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![ZERO; 8];
    amps[0b001] = Complex64::new(r, 0.0);
    amps[0b101] = Complex64::new(r, 0.0);
    StateVector::from_amplitudes(amps).expect("normalized by construction")
}

/// Spectral form of `exp(−iHt)`, reusable across many times.
pub struct Propagator {
    eigen: HermitianEigen,
}

impl Propagator {
    pub fn new(h: &HamiltonianSpec) -> Result<Self> {
        Ok(Self::from_matrix(&h.dense()?))
    }

    /// `h` must be Hermitian; it is not re-checked.
    pub fn from_matrix(h: &CMatrix) -> Self {
        Self {
            eigen: hermitian_eigen(h),
        }
    }

    pub fn energies(&self) -> &[f64] {
        &self.eigen.values
    }

    pub fn dim(&self) -> usize {
        self.eigen.vectors.nrows()
    }

    pub fn unitary(&self, t: f64) -> CMatrix {
        propagator_from_eigen(&self.eigen, t)
    }

    pub fn evolve_state(&self, t: f64, psi: &StateVector) -> Result<StateVector> {
        self.check(psi.dim())?;
        if t == 0.0 {
            return Ok(psi.clone());
        }
        let v = CVector::from_column_slice(psi.amplitudes());
        let out = self.unitary(t) * v;
        Ok(StateVector::normalized(out.iter().copied().collect())?)
    }

    pub fn evolve_density(&self, t: f64, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check(rho.dim())?;
        if t == 0.0 {
            return Ok(rho.clone());
        }
        let u = self.unitary(t);
        let m = &u * rho.matrix() * u.adjoint();
        // Symmetrize away rounding so downstream checks see exact Hermiticity.
        let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(DensityMatrix::from_matrix_unchecked(m))
    }

    fn check(&self, dim: usize) -> Result<()> {
        if dim != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: dim,
            });
        }
        Ok(())
    }
}

pub fn evolve_state(h: &HamiltonianSpec, t: f64, psi: &StateVector) -> Result<StateVector> {
    Propagator::new(h)?.evolve_state(t, psi)
}

pub fn evolve_density(h: &HamiltonianSpec, t: f64, rho: &DensityMatrix) -> Result<DensityMatrix> {
    Propagator::new(h)?.evolve_density(t, rho)
}

/// `points` equally spaced times from 0 to `t_max` inclusive.
pub fn uniform_grid(t_max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points)
            .map(|k| t_max * k as f64 / (points - 1) as f64)
            .collect(),
    }
}

pub const DEFAULT_GRID_POINTS: usize = 400;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReducedSample {
    pub t: f64,
    pub rho: DensityMatrix,
    pub entropy_bits: f64,
    pub purity: f64,
    /// Largest off-diagonal modulus of the reduced state.
    pub offdiag_abs: f64,
}

/// Evolves `rho_se0` and traces down to `keep` at each time.
pub fn reduced_evolution(
    h: &HamiltonianSpec,
    t_grid: &[f64],
    rho_se0: &DensityMatrix,
    keep: &[usize],
) -> Result<Vec<ReducedSample>> {
    let prop = Propagator::new(h)?;
    t_grid
        .iter()
        .map(|&t| {
            let rho = prop.evolve_density(t, rho_se0)?.partial_trace(keep)?;
            let report = rho.von_neumann_entropy()?;
            let m = rho.matrix();
            let mut offdiag_abs: f64 = 0.0;
            for r in 0..m.nrows() {
                for c in 0..m.ncols() {
                    if r != c {
                        offdiag_abs = offdiag_abs.max(m[(r, c)].norm());
                    }
                }
            }
            Ok(ReducedSample {
                t,
                entropy_bits: report.entropy_bits,
                purity: report.purity,
                offdiag_abs,
                rho,
            })
        })
        .collect()
}

/// CSV with columns `t, entropy_bits, purity, offdiag_abs` followed by the
/// row-major real and imaginary parts of the reduced state.
pub fn reduced_series_csv(samples: &[ReducedSample]) -> String {
    let mut out = String::from("t,entropy_bits,purity,offdiag_abs");
    let d = samples.first().map_or(0, |s| s.rho.dim());
    for r in 0..d {
        for c in 0..d {
            write!(out, ",rho{r}{c}_re,rho{r}{c}_im").unwrap();
        }
    }
    out.push('\n');
    for s in samples {
        write!(out, "{},{},{},{}", s.t, s.entropy_bits, s.purity, s.offdiag_abs).unwrap();
        for z in s.rho.matrix().transpose().iter() {
            write!(out, ",{},{}", z.re, z.im).unwrap();
        }
        out.push('\n');
    }
    out
}

/// The four 2×2 blocks of a two-qubit unitary with the system on qubit 0.
/// `e[a][b]` maps environment `|b>` to environment `|a>`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausSet {
    pub time: f64,
    pub e: [[CMatrix; 2]; 2],
}

impl KrausSet {
    pub fn from_unitary(u: &CMatrix, time: f64) -> Result<Self> {
        if u.nrows() != 4 || u.ncols() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                got: u.nrows(),
            });
        }
        let block = |env_out: usize, env_in: usize| {
            CMatrix::from_fn(2, 2, |s_out, s_in| u[(2 * s_out + env_out, 2 * s_in + env_in)])
        };
        Ok(Self {
            time,
            e: [[block(0, 0), block(0, 1)], [block(1, 0), block(1, 1)]],
        })
    }

    /// `E_ij`, 1-based as in the usual listing.
    pub fn op(&self, i: usize, j: usize) -> &CMatrix {
        &self.e[i - 1][j - 1]
    }

    /// `P_ij = E_ij E_ij†`.
    pub fn p(&self, i: usize, j: usize) -> CMatrix {
        let e = self.op(i, j);
        e * e.adjoint()
    }

    /// `Σ_a E_a,env ρ E_a,env†` for the environment prepared in `|env>`.
    pub fn apply(&self, rho_s: &CMatrix, env: usize) -> CMatrix {
        (0..2)
            .map(|a| {
                let e = &self.e[a][env];
                e * rho_s * e.adjoint()
            })
            .fold(CMatrix::zeros(2, 2), |acc, m| acc + m)
    }
}

pub fn kraus_extract(h: &HamiltonianSpec, t: f64) -> Result<KrausSet> {
    if h.n_qubits != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: h.n_qubits,
        });
    }
    KrausSet::from_unitary(&Propagator::new(h)?.unitary(t), t)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SwapDemo {
    pub t: f64,
    pub record: ExperimentRecord,
    /// Pearson correlation of the q0 and q1 bits; 0 if either is constant.
    pub correlation: f64,
}

pub fn sample_correlation(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}

pub fn swap_measurement_demo(t: f64, shots: usize, seed: u64) -> Result<SwapDemo> {
    if !(0.0..=2.0).contains(&t) {
        return Err(Error::InvalidArgument(format!("t = {t} outside [0, 2]")));
    }
    let record = run_circuit(&swap_circuit(t), shots, seed)?;
    let bits = |name: &str| -> Vec<f64> {
        record.registers.get(name).map_or_else(Vec::new, |v| {
            v.iter().map(|s| if s == "1" { 1.0 } else { 0.0 }).collect()
        })
    };
    let correlation = sample_correlation(&bits("q0"), &bits("q1"));
    Ok(SwapDemo {
        t,
        record,
        correlation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, unitarity_defect};
    use crate::random::{random_density, random_hermitian};
    use crate::rng::seeded_rng;
    use std::f64::consts::SQRT_2;

    #[test]
    fn sigma_z_on_first_qubit() {
        let h = HamiltonianSpec::new(2).term(1.0, &[(0, PauliSymbol::Z)]);
        let d = h.dense().unwrap();
        let diag: Vec<f64> = (0..4).map(|k| d[(k, k)].re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn exchange_couples_01_and_10() {
        let d = two_qubit_model(1.0, 1.0, 1.0).dense().unwrap();
        let expected = cmatrix(
            4,
            4,
            &[
                (-2., 0.), (0., 0.), (0., 0.), (0., 0.),
                (0., 0.), (0., 0.), (-1., 0.), (0., 0.),
                (0., 0.), (-1., 0.), (0., 0.), (0., 0.),
                (0., 0.), (0., 0.), (0., 0.), (2., 0.),
            ],
        );
        assert_eq!(max_abs_diff(&d, &expected), 0.0);
    }

    #[test]
    fn three_qubit_is_hermitian() {
        let d = three_qubit_model(DECOHERENCE_COUPLINGS).dense().unwrap();
        assert_eq!(d.nrows(), 8);
        assert!(hermiticity_defect(&d) < 1e-15);
    }

    #[test]
    fn non_hermitian_rejected() {
        let h = HamiltonianSpec::new(1).term(1.0, &[(0, PauliSymbol::Plus)]);
        assert!(matches!(h.dense(), Err(Error::NotHermitian(_))));
        let bad = OperatorString {
            factors: vec![PauliSymbol::X],
            coefficient: Complex64::new(1.0, 0.0),
        };
        assert!(HamiltonianSpec::from_terms(2, vec![bad]).is_err());
    }

    #[test]
    fn zero_time_is_exact() {
        let psi = decoherence_initial_state();
        let out = evolve_state(&three_qubit_model(DECOHERENCE_COUPLINGS), 0.0, &psi).unwrap();
        assert_eq!(out, psi);
    }

    #[test]
    fn random_propagators_are_unitary_and_compose() {
        let mut rng = seeded_rng(21);
        for _ in 0..10 {
            let h = random_hermitian(8, &mut rng);
            let p = Propagator::from_matrix(&h);
            let (t1, t2) = (0.37, 1.91);
            assert!(unitarity_defect(&p.unitary(t1)) < 1e-10);
            let lhs = p.unitary(t1 + t2);
            let rhs = p.unitary(t1) * p.unitary(t2);
            assert!(max_abs_diff(&lhs, &rhs) < 1e-9);
        }
    }

    #[test]
    fn rabi_diagonal() {
        let h = rabi_model(1.0, 1.0);
        let rho0 = DensityMatrix::from_statevector(&StateVector::basis(2, 0b01));
        let grid = uniform_grid(5.0, 41);
        for s in reduced_evolution(&h, &grid, &rho0, &[0]).unwrap() {
            let c = (SQRT_2 * s.t).cos();
            let m = s.rho.matrix();
            assert!((m[(0, 0)].re - (1.0 + c * c) / 2.0).abs() < 1e-12);
            assert!((m[(1, 1)].re - (1.0 - c * c) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn kraus_matches_partial_trace() {
        let mut rng = seeded_rng(22);
        let h = two_qubit_model(1.0, 1.0, 1.0);
        for k in 0..10 {
            let t = 0.3 * k as f64;
            let ks = kraus_extract(&h, t).unwrap();
            let rho_s = random_density(1, &mut rng);
            for env in 0..2 {
                let joint = rho_s.tensor(&DensityMatrix::from_statevector(&StateVector::basis(1, env)));
                let exact = evolve_density(&h, t, &joint).unwrap().partial_trace(&[0]).unwrap();
                let via = ks.apply(rho_s.matrix(), env);
                assert!(max_abs_diff(&via, exact.matrix()) < 1e-10);
            }
        }
    }

    #[test]
    fn printed_projector_values() {
        let ks = kraus_extract(&two_qubit_model(1.0, 1.0, 1.0), 1.0).unwrap();
        let round = |m: CMatrix| -> Vec<f64> {
            m.iter().map(|z| (z.re * 100.0).round() / 100.0 + 0.0).collect()
        };
        // Column-major storage.
        assert_eq!(round(ks.p(1, 1)), vec![1.0, 0.0, 0.0, 0.29]);
        assert_eq!(round(ks.p(1, 2)), vec![0.0, 0.0, 0.0, 0.71]);
        assert_eq!(round(ks.p(2, 1)), vec![0.71, 0.0, 0.0, 0.0]);
        assert_eq!(round(ks.p(2, 2)), vec![0.29, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn csv_shape() {
        let h = rabi_model(1.0, 1.0);
        let rho0 = DensityMatrix::from_statevector(&StateVector::basis(2, 0b01));
        let s = reduced_evolution(&h, &uniform_grid(1.0, 3), &rho0, &[0]).unwrap();
        let csv = reduced_series_csv(&s);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0].split(',').count(), 12);
        assert!(lines[1].starts_with("0,0,1,0,1,0,"));
    }

    #[test]
    fn correlation_edge_cases() {
        assert_eq!(sample_correlation(&[0.0, 0.0], &[0.0, 1.0]), 0.0);
        assert!((sample_correlation(&[0.0, 1.0, 1.0], &[0.0, 1.0, 1.0]) - 1.0).abs() < 1e-15);
    }
}
