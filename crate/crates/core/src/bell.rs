//! CHSH correlations for the state `cos α|00> + sin α|11>`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::ZERO;
use crate::qstate::{standard_gate, StateVector};
use crate::rng::seeded_rng;

/// Alice measures σᶻ (Q) or σˣ (R); Bob measures `cos b σᶻ + sin b σˣ` with
/// `b = beta` (S) or `b = beta_prime` (T).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChshSettings {
    pub alpha: f64,
    pub beta: f64,
    pub beta_prime: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ChshResult {
    pub e_qs: f64,
    pub e_qt: f64,
    pub e_rs: f64,
    pub e_rt: f64,
    /// `e_qs + e_rs + e_rt − e_qt`.
    pub e_bell: f64,
    pub violation: f64,
}

impl ChshResult {
    fn assemble(e_qs: f64, e_qt: f64, e_rs: f64, e_rt: f64) -> Self {
        let e_bell = e_qs + e_rs + e_rt - e_qt;
        Self {
            e_qs,
            e_qt,
            e_rs,
            e_rt,
            e_bell,
            violation: e_bell - 2.0,
        }
    }
}

pub fn entangled_state(alpha: f64) -> Result<StateVector> {
    if !(0.0..=FRAC_PI_2).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} outside [0, π/2]")));
    }
    StateVector::from_amplitudes(vec![
        Complex64::new(alpha.cos(), 0.0),
        ZERO,
        ZERO,
        Complex64::new(alpha.sin(), 0.0),
    ])
}

/// Entanglement entropy (bits) of either qubit of the α-state.
pub fn entanglement_entropy(alpha: f64) -> Result<f64> {
    DensityMatrix::from_statevector(&entangled_state(alpha)?)
        .partial_trace(&[0])?
        .entropy()
}

pub fn chsh_expectations(s: &ChshSettings) -> ChshResult {
    let s2a = (2.0 * s.alpha).sin();
    ChshResult::assemble(
        s.beta.cos(),
        s.beta_prime.cos(),
        s2a * s.beta.sin(),
        s2a * s.beta_prime.sin(),
    )
}

/// Bob's angles maximizing `E_Bell` for the given α, and that maximum
/// `2√(1 + sin²2α)`.
pub fn optimal_settings(alpha: f64) -> (ChshSettings, f64) {
    let s2a = (2.0 * alpha).sin();
    let beta = s2a.atan2(1.0);
    let settings = ChshSettings {
        alpha,
        beta,
        beta_prime: PI - beta,
    };
    (settings, 2.0 * (1.0 + s2a * s2a).sqrt())
}

/// `β = π/4`, `β' = 3π/4`, giving `E_Bell = √2(1 + sin 2α)`.
pub fn fixed_beta_settings(alpha: f64) -> ChshSettings {
    ChshSettings {
        alpha,
        beta: FRAC_PI_4,
        beta_prime: 3.0 * FRAC_PI_4,
    }
}

/// α at which the fixed-β combination reaches the classical bound 2.
pub fn fixed_beta_crossing() -> f64 {
    0.5 * (std::f64::consts::SQRT_2 - 1.0).asin()
}

/// `qs + rs + rt − qt` for every deterministic assignment in `{±1}⁴`.
pub fn hidden_variable_values() -> Vec<([i8; 4], i8)> {
    let mut out = Vec::with_capacity(16);
    for bits in 0..16u8 {
        let v = |k: u8| if bits >> k & 1 == 1 { 1i8 } else { -1i8 };
        let (q, r, s, t) = (v(3), v(2), v(1), v(0));
        out.push(([q, r, s, t], q * s + r * s + r * t - q * t));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SampledChsh {
    pub result: ChshResult,
    /// Standard errors of `e_qs, e_qt, e_rs, e_rt`.
    pub pair_se: [f64; 4],
    pub e_bell_se: f64,
    pub counts: [usize; 4],
}

/// Monte Carlo CHSH run. Each shot picks Alice's and Bob's bases with
/// probability ½, rotates the measured observables onto σᶻ and measures in
/// the computational basis.
pub fn sampled_chsh(settings: &ChshSettings, shots: usize, seed: u64) -> Result<SampledChsh> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let psi = entangled_state(settings.alpha)?;
    let h = standard_gate("H", &[])?;
    // Y^(b/π) = exp(i b Y/2) maps the eigenbasis of cos b σᶻ + sin b σˣ onto σᶻ.
    let bob = [
        standard_gate("YPow", &[settings.beta / PI])?,
        standard_gate("YPow", &[settings.beta_prime / PI])?,
    ];
    // Index: 2·alice + bob with alice 0 = Q, 1 = R and bob 0 = S, 1 = T.
    let mut rotated = Vec::with_capacity(4);
    for alice_x in [false, true] {
        let a = if alice_x { psi.apply_gate(&h, &[0])? } else { psi.clone() };
        for g in &bob {
            rotated.push(a.apply_gate(g, &[1])?);
        }
    }

    let mut rng = seeded_rng(seed);
    let mut sums = [0i64; 4];
    let mut counts = [0usize; 4];
    for _ in 0..shots {
        let a: usize = rng.gen_range(0..2);
        let b: usize = rng.gen_range(0..2);
        let k = 2 * a + b;
        let (bits, _) = rotated[k].measure(&[0, 1], &mut rng)?;
        sums[k] += if bits[0] == bits[1] { 1 } else { -1 };
        counts[k] += 1;
    }

    let mut mean = [0.0; 4];
    let mut se = [0.0; 4];
    for k in 0..4 {
        if counts[k] > 0 {
            let m = sums[k] as f64 / counts[k] as f64;
            mean[k] = m;
            se[k] = ((1.0 - m * m).max(0.0) / counts[k] as f64).sqrt();
        }
    }
    // Storage order is (QS, QT, RS, RT).
    let result = ChshResult::assemble(mean[0], mean[1], mean[2], mean[3]);
    let e_bell_se = se.iter().map(|s| s * s).sum::<f64>().sqrt();
    Ok(SampledChsh {
        result,
        pair_se: se,
        e_bell_se,
        counts,
    })
}

/// `(α, entropy, E_Bell − 2)` at optimal settings over `points` values of α
/// spanning `[0, π/2]`.
pub fn violation_curve(points: usize) -> Result<Vec<(f64, f64, f64)>> {
    (0..points)
        .map(|k| {
            let alpha = if points == 1 {
                0.0
            } else {
                FRAC_PI_2 * k as f64 / (points - 1) as f64
            };
            let (_, e_max) = optimal_settings(alpha);
            Ok((alpha, entanglement_entropy(alpha)?, e_max - 2.0))
        })
        .collect()
}

pub fn violation_csv(curve: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("alpha,entropy,violation\n");
    for (a, s, v) in curve {
        writeln!(out, "{a},{s},{v}").unwrap();
    }
    out
}
