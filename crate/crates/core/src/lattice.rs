//! Qubit digitization of a scalar field and the truncated two-site Schwinger
//! model.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::dynamics::{HamiltonianSpec, PauliSymbol, Propagator};
use crate::error::{Error, Result};
use crate::linalg::{cmatrix, symmetric_eigen, RMatrix};
use crate::qstate::StateVector;

pub const MAX_DIGITIZATION_QUBITS: usize = 10;
/// Highest Hermite level evaluated by the recurrence.
pub const MAX_HERMITE_LEVEL: usize = 60;
pub const FINE_GRID_POINTS: usize = 4001;

/// Diagonal operator written as a sum of σᶻ strings. `factors[q]` is true
/// where qubit `q` carries σᶻ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PauliDecomposition {
    pub n_qubits: usize,
    pub terms: Vec<(i64, Vec<bool>)>,
}

impl PauliDecomposition {
    /// Exact Walsh–Hadamard projection of an integer diagonal.
    pub fn from_diagonal(diagonal: &[i64]) -> Self {
        let dim = diagonal.len();
        assert!(dim.is_power_of_two() && dim >= 2);
        let n_qubits = dim.trailing_zeros() as usize;
        let mut w = diagonal.to_vec();
        let mut h = 1;
        while h < dim {
            for block in (0..dim).step_by(2 * h) {
                for i in block..block + h {
                    let (a, b) = (w[i], w[i + h]);
                    w[i] = a + b;
                    w[i + h] = a - b;
                }
            }
            h *= 2;
        }
        let mut terms = Vec::new();
        // Mask bit (n−1−q) marks qubit q, matching the basis-index convention.
        for (mask, &v) in w.iter().enumerate() {
            if v == 0 {
                continue;
            }
            assert_eq!(v % dim as i64, 0, "non-integer Pauli coefficient");
            let factors = (0..n_qubits)
                .map(|q| mask >> (n_qubits - 1 - q) & 1 == 1)
                .collect();
            terms.push((v / dim as i64, factors));
        }
        Self { n_qubits, terms }
    }

    /// Eigenvalue on computational basis state `index`.
    pub fn eigenvalue(&self, index: usize) -> i64 {
        self.terms
            .iter()
            .map(|(c, f)| {
                let flips = f
                    .iter()
                    .enumerate()
                    .filter(|&(q, &z)| z && index >> (self.n_qubits - 1 - q) & 1 == 1)
                    .count();
                if flips % 2 == 0 {
                    *c
                } else {
                    -*c
                }
            })
            .sum()
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..1usize << self.n_qubits).map(|i| self.eigenvalue(i)).collect()
    }

    /// Terms as `(coefficient, "ZIZ")` with qubit 0 leftmost.
    pub fn labelled_terms(&self) -> Vec<(i64, String)> {
        self.terms
            .iter()
            .map(|(c, f)| (*c, f.iter().map(|&z| if z { 'Z' } else { 'I' }).collect()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DigitizedField {
    pub n_q: usize,
    /// Field spacing `Δ = 2L/N_φ` at the Nyquist truncation.
    pub delta: f64,
    /// `φ_q = 2φ/Δ + 1` ladder by basis index.
    pub eigenvalues: Vec<i64>,
    pub phi: PauliDecomposition,
    pub phi_squared: PauliDecomposition,
}

pub fn digitize(n_q: usize) -> Result<DigitizedField> {
    if !(1..=MAX_DIGITIZATION_QUBITS).contains(&n_q) {
        return Err(Error::InvalidArgument(format!(
            "n_q = {n_q} outside 1..={MAX_DIGITIZATION_QUBITS}"
        )));
    }
    let n_phi = 1usize << n_q;
    let eigenvalues: Vec<i64> = (0..n_phi as i64).map(|k| n_phi as i64 - 1 - 2 * k).collect();
    let squares: Vec<i64> = eigenvalues.iter().map(|v| v * v).collect();
    Ok(DigitizedField {
        n_q,
        delta: 2.0 * nyquist_l(n_phi)? / n_phi as f64,
        phi: PauliDecomposition::from_diagonal(&eigenvalues),
        phi_squared: PauliDecomposition::from_diagonal(&squares),
        eigenvalues,
    })
}

impl DigitizedField {
    /// `{n_q, eigenvalues, pauli_terms}`.
    pub fn table_json(&self) -> serde_json::Value {
        let terms = |d: &PauliDecomposition| {
            d.labelled_terms()
                .into_iter()
                .map(|(c, f)| serde_json::json!({ "coefficient": c, "factors": f }))
                .collect::<Vec<_>>()
        };
        serde_json::json!({
            "n_q": self.n_q,
            "eigenvalues": self.eigenvalues,
            "pauli_terms": { "phi": terms(&self.phi), "phi_squared": terms(&self.phi_squared) },
        })
    }
}

/// `L = √(N_φ π / 2)`.
pub fn nyquist_l(n_phi: usize) -> Result<f64> {
    if n_phi < 2 {
        return Err(Error::InvalidArgument(format!("N_φ = {n_phi} must be at least 2")));
    }
    Ok((n_phi as f64 * PI / 2.0).sqrt())
}

/// Normalized oscillator eigenfunction `Ψ_n(x)`, by the three-term
/// recurrence on `Ψ_n` itself.
pub fn hermite_eigenfunction(n: usize, x: f64) -> Result<f64> {
    if n > MAX_HERMITE_LEVEL {
        return Err(Error::UnstableRecurrence(n));
    }
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for k in 0..n {
        let next = (2.0 / (k as f64 + 1.0)).sqrt() * x * cur
            - (k as f64 / (k as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Sample points `x_k = −L + (k+½)·2L/N`.
pub fn sample_points(n_phi: usize) -> Result<Vec<f64>> {
    let l = nyquist_l(n_phi)?;
    let h = 2.0 * l / n_phi as f64;
    Ok((0..n_phi).map(|k| -l + (k as f64 + 0.5) * h).collect())
}

/// Trigonometric interpolant of period `2L` through `samples` at the
/// [`sample_points`], evaluated at `x`.
pub fn band_limited_interpolant(samples: &[f64], l: f64, x: f64) -> f64 {
    let n = samples.len();
    let h = 2.0 * l / n as f64;
    samples
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let d = (x - (-l + (k as f64 + 0.5) * h)) * PI / (2.0 * l);
            let kernel = if d.sin().abs() < 1e-14 {
                (n as f64 * d).cos() / d.cos()
            } else {
                (n as f64 * d).sin() / (n as f64 * d.tan())
            };
            s * kernel
        })
        .sum()
}

/// `H = ½(p² + x²)` on the sample points, with `p²` the spectral
/// second derivative.
pub fn digitized_oscillator(n_phi: usize) -> Result<RMatrix> {
    let xs = sample_points(n_phi)?;
    let h = xs[1] - xs[0];
    let n = n_phi as i64;
    let wavenumbers: Vec<f64> = (0..n)
        .map(|m| {
            let f = if m < (n + 1) / 2 { m } else { m - n };
            2.0 * PI * f as f64 / (n as f64 * h)
        })
        .collect();
    Ok(RMatrix::from_fn(n_phi, n_phi, |a, b| {
        let dx = xs[a] - xs[b];
        let p2: f64 = wavenumbers.iter().map(|k| k * k * (k * dx).cos()).sum::<f64>() / n as f64;
        0.5 * p2 + if a == b { 0.5 * xs[a] * xs[a] } else { 0.0 }
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelFidelity {
    pub level: usize,
    /// Max `|Ψ_n − interpolant|` on a fine grid over `[−L, L]`.
    pub max_error: f64,
    /// `1 − |⟨sampled Ψ_n, n-th digitized eigenvector⟩|`, for `n < N_φ`.
    pub eigenvector_infidelity: Option<f64>,
    /// `E_n − (n + ½)` of the digitized oscillator, for `n < N_φ`.
    pub energy_error: Option<f64>,
}

pub fn sampling_fidelity(n_q: usize, n_levels: usize) -> Result<Vec<LevelFidelity>> {
    if n_q == 0 || n_q > 8 {
        return Err(Error::InvalidArgument(format!("n_q = {n_q} outside 1..=8")));
    }
    if n_levels > MAX_HERMITE_LEVEL + 1 {
        return Err(Error::UnstableRecurrence(n_levels - 1));
    }
    let n_phi = 1usize << n_q;
    let l = nyquist_l(n_phi)?;
    let xs = sample_points(n_phi)?;
    let fine: Vec<f64> = (0..FINE_GRID_POINTS)
        .map(|i| -l + 2.0 * l * i as f64 / (FINE_GRID_POINTS - 1) as f64)
        .collect();
    let eig = symmetric_eigen(&digitized_oscillator(n_phi)?);

    (0..n_levels)
        .map(|n| {
            let samples = xs
                .iter()
                .map(|&x| hermite_eigenfunction(n, x))
                .collect::<Result<Vec<f64>>>()?;
            let mut max_error = 0.0f64;
            for &x in &fine {
                let err = (band_limited_interpolant(&samples, l, x) - hermite_eigenfunction(n, x)?).abs();
                max_error = max_error.max(err);
            }
            let (eigenvector_infidelity, energy_error) = if n < n_phi {
                let norm = samples.iter().map(|s| s * s).sum::<f64>().sqrt();
                let overlap: f64 = samples
                    .iter()
                    .zip(eig.vectors.column(n).iter())
                    .map(|(s, v)| s * v)
                    .sum::<f64>()
                    / norm;
                (Some((1.0 - overlap.abs()).max(0.0)), Some(eig.values[n] - (n as f64 + 0.5)))
            } else {
                (None, None)
            };
            Ok(LevelFidelity {
                level: n,
                max_error,
                eigenvector_infidelity,
                energy_error,
            })
        })
        .collect()
}

/// `x, Ψ_0(x), …, Ψ_{levels−1}(x)` on `points` values spanning `[−x_max, x_max]`.
pub fn eigenfunction_table_csv(levels: usize, x_max: f64, points: usize) -> Result<String> {
    let mut out = String::from("x");
    for n in 0..levels {
        write!(out, ",psi{n}").unwrap();
    }
    out.push('\n');
    for i in 0..points {
        let x = if points == 1 {
            0.0
        } else {
            -x_max + 2.0 * x_max * i as f64 / (points - 1) as f64
        };
        write!(out, "{x}").unwrap();
        for n in 0..levels {
            write!(out, ",{}", hermite_eigenfunction(n, x)?).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

/// `x = 1/(ag)²`, `mu = 2m/(ag²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SchwingerParams {
    pub x: f64,
    pub mu: f64,
}

impl SchwingerParams {
    pub fn new(x: f64, mu: f64) -> Result<Self> {
        if !x.is_finite() || !mu.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite parameters x = {x}, μ = {mu}")));
        }
        Ok(Self { x, mu })
    }
}

/// Hamiltonian on the four zero-charge, translation-invariant, C-even states.
pub fn schwinger_h4(p: SchwingerParams) -> RMatrix {
    let (x, mu) = (p.x, p.mu);
    let r = 2f64.sqrt() * x;
    RMatrix::from_row_slice(
        4,
        4,
        &[
            -2.0 * mu, 2.0 * x, 0.0, 0.0,
            2.0 * x, 1.0, r, 0.0,
            0.0, r, 2.0 + 2.0 * mu, r,
            0.0, 0.0, r, 3.0,
        ],
    )
}

/// Lowest eigenpair of [`schwinger_h4`], sign fixed so the largest component
/// is positive.
pub fn schwinger_ground_state(p: SchwingerParams) -> (f64, [f64; 4]) {
    let eig = symmetric_eigen(&schwinger_h4(p));
    let col = eig.vectors.column(0);
    let lead = col.iter().copied().fold(0.0f64, |a, v| if v.abs() > a.abs() { v } else { a });
    let s = if lead < 0.0 { -1.0 } else { 1.0 };
    (eig.values[0], [s * col[0], s * col[1], s * col[2], s * col[3]])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SchwingerSample {
    pub t: f64,
    pub p: [f64; 4],
}

/// `p_i(t) = |⟨s_i|e^{−iH₄t}|s₁⟩|²` from the eigendecomposition of `H₄`.
pub fn schwinger_evolve(p: SchwingerParams, grid: &[f64]) -> Vec<SchwingerSample> {
    let eig = symmetric_eigen(&schwinger_h4(p));
    grid.iter()
        .map(|&t| {
            let mut probs = [1.0, 0.0, 0.0, 0.0];
            if t == 0.0 {
                return SchwingerSample { t, p: probs };
            }
            for (i, pi) in probs.iter_mut().enumerate() {
                let amp: Complex64 = (0..4)
                    .map(|k| {
                        Complex64::from_polar(eig.vectors[(i, k)] * eig.vectors[(0, k)], -eig.values[k] * t)
                    })
                    .sum();
                *pi = amp.norm_sqr();
            }
            SchwingerSample { t, p: probs }
        })
        .collect()
}

/// `H₄` on two qubits, `|s_{i+1}⟩ ↔ |i⟩`, as a sum of Pauli strings with
/// coefficients `tr(P H₄)/4`.
pub fn schwinger_qubit_hamiltonian(p: SchwingerParams) -> Result<HamiltonianSpec> {
    use PauliSymbol::{I, X, Y, Z};
    let h4 = schwinger_h4(p);
    let hc = cmatrix(4, 4, &h4.iter().map(|&v| (v, 0.0)).collect::<Vec<_>>());
    let mut spec = HamiltonianSpec::new(2);
    for a in [I, X, Y, Z] {
        for b in [I, X, Y, Z] {
            let pm = a.matrix().kronecker(&b.matrix());
            let c = (&pm * &hc).trace() / 4.0;
            if c.norm() > 1e-15 {
                if c.im.abs() > 1e-12 {
                    return Err(Error::NotHermitian(c.im.abs()));
                }
                spec = spec.term(c.re, &[(0, a), (1, b)]);
            }
        }
    }
    Ok(spec)
}

/// Same series as [`schwinger_evolve`], propagated as a two-qubit state.
pub fn schwinger_evolve_qubits(p: SchwingerParams, grid: &[f64]) -> Result<Vec<SchwingerSample>> {
    let prop = Propagator::new(&schwinger_qubit_hamiltonian(p)?)?;
    let psi0 = StateVector::zero(2);
    grid.iter()
        .map(|&t| {
            let probs = prop.evolve_state(t, &psi0)?.probabilities();
            Ok(SchwingerSample {
                t,
                p: [probs[0], probs[1], probs[2], probs[3]],
            })
        })
        .collect()
}

pub fn schwinger_csv(series: &[SchwingerSample]) -> String {
    let mut out = String::from("t,p1,p2,p3,p4\n");
    for s in series {
        writeln!(out, "{},{},{},{},{}", s.t, s.p[0], s.p[1], s.p[2], s.p[3]).unwrap();
    }
    out
}

const SITES: usize = 4;
const FLUX_LEVELS: usize = 3;
/// Sites 0..4 (two levels each) then links 0..4 (three levels each).
pub const FULL_DIM: usize = 16 * 81;

/// Fermion content and link fluxes of one configuration; link `n` sits
/// between sites `n` and `n+1` (periodic).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Configuration {
    pub occupied: [bool; SITES],
    pub flux: [i8; SITES],
}

impl Configuration {
    pub fn new(occupied: [bool; SITES], flux: [i8; SITES]) -> Self {
        Self { occupied, flux }
    }

    /// Site qubit index: occupation is `(10)` (index 0) on even sites and
    /// `(01)` (index 1) on odd sites.
    fn site_index(&self, n: usize) -> usize {
        let even = n % 2 == 0;
        usize::from(self.occupied[n] != even)
    }

    pub fn basis_index(&self) -> usize {
        let mut idx = 0;
        for n in 0..SITES {
            idx = idx * 2 + self.site_index(n);
        }
        for n in 0..SITES {
            idx = idx * FLUX_LEVELS + (self.flux[n] + 1) as usize;
        }
        idx
    }

    /// Flux truncation `|ℓ| ≤ 1`, `Σℓ² < 4`, and Gauss's law: passing an
    /// e⁺ (odd site) raises the flux by one, an e⁻ (even site) lowers it.
    pub fn validate(&self) -> Result<()> {
        if self.flux.iter().any(|l| l.abs() > 1) {
            return Err(Error::BasisInconsistency(format!("flux {:?} outside {{−1,0,1}}", self.flux)));
        }
        let energy: i32 = self.flux.iter().map(|&l| i32::from(l) * i32::from(l)).sum();
        if energy >= 4 {
            return Err(Error::BasisInconsistency(format!("flux {:?} has Σℓ² = {energy}", self.flux)));
        }
        for n in 0..SITES {
            let charge = match (self.occupied[n], n % 2) {
                (false, _) => 0,
                (true, 0) => -1,
                (true, _) => 1,
            };
            let prev = self.flux[(n + SITES - 1) % SITES];
            if self.flux[n] - prev != charge {
                return Err(Error::BasisInconsistency(format!(
                    "Gauss's law fails at site {n} for {:?}",
                    self
                )));
            }
        }
        Ok(())
    }
}

/// The four symmetric states as superpositions of configurations.
pub fn schwinger_configurations() -> [Vec<(f64, Configuration)>; 4] {
    let c = Configuration::new;
    let (e_pair_01, e_pair_23) = ([true, true, false, false], [false, false, true, true]);
    let (e_pair_30, e_pair_12) = ([true, false, false, true], [false, true, true, false]);
    let full = [true; 4];
    let s2 = 1.0 / 2f64.sqrt();
    [
        vec![(1.0, c([false; 4], [0, 0, 0, 0]))],
        vec![
            (0.5, c(e_pair_01, [-1, 0, 0, 0])),
            (0.5, c(e_pair_23, [0, 0, -1, 0])),
            (0.5, c(e_pair_30, [0, 0, 0, 1])),
            (0.5, c(e_pair_12, [0, 1, 0, 0])),
        ],
        vec![(s2, c(full, [-1, 0, -1, 0])), (s2, c(full, [0, 1, 0, 1]))],
        vec![
            (0.5, c(e_pair_01, [0, 1, 1, 1])),
            (0.5, c(e_pair_23, [1, 1, 0, 1])),
            (0.5, c(e_pair_30, [-1, -1, -1, 0])),
            (0.5, c(e_pair_12, [-1, 0, -1, -1])),
        ],
    ]
}

/// Explicit vectors in the full site⊗link space.
pub fn schwinger_basis() -> Result<[Vec<f64>; 4]> {
    let mut out: [Vec<f64>; 4] = Default::default();
    for (v, comps) in out.iter_mut().zip(schwinger_configurations()) {
        *v = vec![0.0; FULL_DIM];
        for (amp, cfg) in comps {
            cfg.validate()?;
            v[cfg.basis_index()] += amp;
        }
    }
    Ok(out)
}

// Sparse operator on one tensor factor: (row, col, value).
type LocalOp = (usize, &'static [(usize, usize, f64)]);

const SIGMA_PLUS: &[(usize, usize, f64)] = &[(0, 1, 1.0)];
const SIGMA_MINUS: &[(usize, usize, f64)] = &[(1, 0, 1.0)];
const SIGMA_Z: &[(usize, usize, f64)] = &[(0, 0, 1.0), (1, 1, -1.0)];
/// `L⁺`: lowers the flux by one unit (index = ℓ + 1).
const FLUX_L_PLUS: &[(usize, usize, f64)] = &[(0, 1, 1.0), (1, 2, 1.0)];
/// `L⁻`: raises the flux by one unit.
const FLUX_L_MINUS: &[(usize, usize, f64)] = &[(1, 0, 1.0), (2, 1, 1.0)];
const FLUX_SQUARED: &[(usize, usize, f64)] = &[(0, 0, 1.0), (2, 2, 1.0)];

const RADICES: [usize; 8] = [2, 2, 2, 2, 3, 3, 3, 3];

fn decode(mut idx: usize) -> [usize; 8] {
    let mut digits = [0; 8];
    for f in (0..8).rev() {
        digits[f] = idx % RADICES[f];
        idx /= RADICES[f];
    }
    digits
}

fn encode(digits: &[usize; 8]) -> usize {
    digits.iter().zip(RADICES).fold(0, |acc, (&d, r)| acc * r + d)
}

fn apply_product(coef: f64, ops: &[LocalOp], psi: &[f64], out: &mut [f64]) {
    for (idx, &amp) in psi.iter().enumerate() {
        if amp == 0.0 {
            continue;
        }
        let mut branches = vec![(decode(idx), coef * amp)];
        for &(factor, entries) in ops {
            let mut next = Vec::new();
            for (digits, a) in &branches {
                for &(row, col, v) in entries {
                    if digits[factor] == col {
                        let mut d = *digits;
                        d[factor] = row;
                        next.push((d, a * v));
                    }
                }
            }
            branches = next;
        }
        for (digits, a) in branches {
            out[encode(&digits)] += a;
        }
    }
}

/// `H|ψ⟩` for the full lattice Hamiltonian on the site⊗link space.
pub fn schwinger_full_apply(p: SchwingerParams, psi: &[f64]) -> Result<Vec<f64>> {
    if psi.len() != FULL_DIM {
        return Err(Error::DimensionMismatch {
            expected: FULL_DIM,
            got: psi.len(),
        });
    }
    let mut out = vec![0.0; FULL_DIM];
    let link = |n: usize| SITES + n;
    for n in 0..SITES {
        let m = (n + 1) % SITES;
        apply_product(p.x, &[(n, SIGMA_PLUS), (link(n), FLUX_L_PLUS), (m, SIGMA_MINUS)], psi, &mut out);
        apply_product(p.x, &[(m, SIGMA_PLUS), (link(n), FLUX_L_MINUS), (n, SIGMA_MINUS)], psi, &mut out);
        apply_product(1.0, &[(link(n), FLUX_SQUARED)], psi, &mut out);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        apply_product(0.5 * p.mu * sign, &[(n, SIGMA_Z)], psi, &mut out);
    }
    Ok(out)
}

/// `⟨s_i|H|s_j⟩` computed on the full site⊗link space.
pub fn schwinger_project(p: SchwingerParams) -> Result<RMatrix> {
    let basis = schwinger_basis()?;
    let images = basis
        .iter()
        .map(|v| schwinger_full_apply(p, v))
        .collect::<Result<Vec<_>>>()?;
    Ok(RMatrix::from_fn(4, 4, |i, j| {
        basis[i].iter().zip(&images[j]).map(|(a, b)| a * b).sum()
    }))
}

/// Gram matrix of the constructed states.
pub fn schwinger_gram() -> Result<RMatrix> {
    let basis = schwinger_basis()?;
    Ok(RMatrix::from_fn(4, 4, |i, j| {
        basis[i].iter().zip(&basis[j]).map(|(a, b)| a * b).sum()
    }))
}
