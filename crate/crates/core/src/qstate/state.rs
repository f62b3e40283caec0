use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::gate::Gate;
use crate::error::{Error, Result};
use crate::linalg::{ONE, ZERO};

/// Probability below which a sampled measurement branch is treated as a fault.
pub const MIN_BRANCH_PROBABILITY: f64 = 1e-15;

/// Dense state vector of an n-qubit register.
///
/// Qubit 0 is the most significant bit of the basis index, so the ket
/// `|q0 q1 ... q(n-1)>` has index `q0·2^(n-1) + ... + q(n-1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Point in the Bloch ball.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn radius(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Max componentwise distance.
    pub fn distance(&self, other: &BlochVector) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }

    /// Bloch vector of a 2×2 density matrix `[[r00, r01], [r10, r11]]`.
    pub fn from_qubit_density(rho: &[[Complex64; 2]; 2]) -> Self {
        Self {
            x: 2.0 * rho[0][1].re,
            y: -2.0 * rho[0][1].im,
            z: rho[0][0].re - rho[1][1].re,
        }
    }
}

impl StateVector {
    /// `|0...0>` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let dim = 1usize << n_qubits;
        assert!(index < dim, "basis index {index} out of range");
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Self {
            n_qubits,
            amplitudes,
        }
    }

    /// Wraps an amplitude array; the length must be a power of two and the
    /// state normalized to within 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: len.next_power_of_two().max(1),
                got: len,
            });
        }
        let state = Self {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Builds a normalized state from arbitrary (non-zero) amplitudes.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::from_amplitudes(amplitudes)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `|<self|other>|²`, insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        StateVector {
            n_qubits: self.n_qubits + other.n_qubits,
            amplitudes,
        }
    }

    fn shift(&self, qubit: usize) -> usize {
        self.n_qubits - 1 - qubit
    }

    fn check_index(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            Err(Error::IndexOutOfRange {
                index: qubit,
                n_qubits: self.n_qubits,
            })
        } else {
            Ok(())
        }
    }

    fn check_targets(&self, targets: &[usize]) -> Result<()> {
        for (i, &t) in targets.iter().enumerate() {
            self.check_index(t)?;
            if targets[..i].contains(&t) {
                return Err(Error::DuplicateTarget(t));
            }
        }
        Ok(())
    }

    /// Applies `gate` to `targets` in place. For two-qubit gates the first
    /// target is the more significant bit of the gate's local index (the
    /// control, for controlled gates).
    pub fn apply(&mut self, gate: &Gate, targets: &[usize]) -> Result<()> {
        if gate.arity() != targets.len() {
            return Err(Error::ArityMismatch {
                arity: gate.arity(),
                targets: targets.len(),
            });
        }
        self.check_targets(targets)?;
        let m = gate.matrix();
        match targets {
            [t] => {
                let mask = 1usize << self.shift(*t);
                let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
                for i in 0..self.dim() {
                    if i & mask != 0 {
                        continue;
                    }
                    let a0 = self.amplitudes[i];
                    let a1 = self.amplitudes[i | mask];
                    self.amplitudes[i] = m00 * a0 + m01 * a1;
                    self.amplitudes[i | mask] = m10 * a0 + m11 * a1;
                }
            }
            [t0, t1] => {
                let hi = 1usize << self.shift(*t0);
                let lo = 1usize << self.shift(*t1);
                for i in 0..self.dim() {
                    if i & (hi | lo) != 0 {
                        continue;
                    }
                    let idx = [i, i | lo, i | hi, i | hi | lo];
                    let old = idx.map(|k| self.amplitudes[k]);
                    for (r, &k) in idx.iter().enumerate() {
                        self.amplitudes[k] = (0..4).map(|c| m[(r, c)] * old[c]).sum();
                    }
                }
            }
            _ => unreachable!("gates have arity 1 or 2"),
        }
        Ok(())
    }

    /// Returns a copy with `gate` applied.
    pub fn apply_gate(&self, gate: &Gate, targets: &[usize]) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply(gate, targets)?;
        Ok(out)
    }

    /// Projective measurement of `qubits` in the computational basis.
    ///
    /// The outcome is drawn by inverse-CDF sampling over the joint outcome
    /// probabilities; bits are returned in the order of `qubits`. The returned
    /// state is the renormalized projection.
    pub fn measure<R: Rng + ?Sized>(
        &self,
        qubits: &[usize],
        rng: &mut R,
    ) -> Result<(Vec<u8>, StateVector)> {
        self.check_targets(qubits)?;
        let k = qubits.len();
        let shifts: Vec<usize> = qubits.iter().map(|&q| self.shift(q)).collect();
        let outcome_of = |i: usize| {
            shifts
                .iter()
                .fold(0usize, |acc, &s| (acc << 1) | ((i >> s) & 1))
        };

        let mut probs = vec![0.0; 1 << k];
        for (i, a) in self.amplitudes.iter().enumerate() {
            probs[outcome_of(i)] += a.norm_sqr();
        }

        let u: f64 = rng.gen();
        let mut cumulative = 0.0;
        let mut chosen = None;
        for (o, &p) in probs.iter().enumerate() {
            cumulative += p;
            if u < cumulative {
                chosen = Some(o);
                break;
            }
        }
        // Rounding can leave the total slightly below u.
        let outcome = chosen
            .or_else(|| probs.iter().rposition(|&p| p > 0.0))
            .unwrap_or(0);
        let p = probs[outcome];
        if p < MIN_BRANCH_PROBABILITY {
            return Err(Error::DegenerateProjection(p));
        }

        let scale = 1.0 / p.sqrt();
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| if outcome_of(i) == outcome { a * scale } else { ZERO })
            .collect();
        let bits = (0..k).map(|j| ((outcome >> (k - 1 - j)) & 1) as u8).collect();
        Ok((
            bits,
            StateVector {
                n_qubits: self.n_qubits,
                amplitudes,
            },
        ))
    }

    /// Reduced 2×2 density matrix of one qubit.
    pub fn qubit_density(&self, qubit: usize) -> Result<[[Complex64; 2]; 2]> {
        self.check_index(qubit)?;
        let mask = 1usize << self.shift(qubit);
        let mut rho = [[ZERO; 2]; 2];
        for i in 0..self.dim() {
            if i & mask != 0 {
                continue;
            }
            let a0 = self.amplitudes[i];
            let a1 = self.amplitudes[i | mask];
            rho[0][0] += a0 * a0.conj();
            rho[0][1] += a0 * a1.conj();
            rho[1][0] += a1 * a0.conj();
            rho[1][1] += a1 * a1.conj();
        }
        Ok(rho)
    }

    /// Pauli expectation values of the reduced state of `qubit`.
    pub fn bloch(&self, qubit: usize) -> Result<BlochVector> {
        Ok(BlochVector::from_qubit_density(&self.qubit_density(qubit)?))
    }
}
