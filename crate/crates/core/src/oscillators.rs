//! Entanglement of Gaussian oscillator ground states: thermal entropy, the
//! two-oscillator thermofield double, correlator-based subsystem entropy and
//! the area-law scan on a radial lattice.
//!
//! Entropies in this module are in nats.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, symmetric_eigenvalues, RMatrix};

const SYMMETRY_TOL: f64 = 1e-12;
/// Symplectic eigenvalues may undershoot ½ by this much before the
/// computation is rejected.
pub const SYMPLECTIC_TOL: f64 = 1e-9;
const FORM_AGREEMENT_TOL: f64 = 1e-10;

/// `(c+½)ln(c+½) − (c−½)ln(c−½)`, with `c` within [`SYMPLECTIC_TOL`] of ½
/// contributing zero.
pub fn c_entropy(c: f64) -> f64 {
    let d = c - 0.5;
    if d <= SYMPLECTIC_TOL {
        return 0.0;
    }
    (c + 0.5) * (c + 0.5).ln() - d * d.ln()
}

/// Boltzmann-sum form `−ln(1−e^{−x}) + x e^{−x}/(1−e^{−x})` and the c-form
/// with `c = ½ coth(x/2)`, for `x = βω`.
pub fn thermal_entropy_forms(beta_omega: f64) -> Result<(f64, f64)> {
    if !(beta_omega > 0.0) || !beta_omega.is_finite() {
        return Err(Error::InvalidArgument(format!("βω = {beta_omega} must be positive")));
    }
    let x = beta_omega;
    let q = (-x).exp();
    let boltzmann = -(-q).ln_1p() + x / x.exp_m1();
    Ok((boltzmann, thermal_c_entropy(x)))
}

// c = ½coth(x/2), written through c − ½ = 1/(e^x − 1) to avoid cancellation.
fn thermal_c_entropy(x: f64) -> f64 {
    let d = 1.0 / x.exp_m1();
    if d == 0.0 {
        return 0.0;
    }
    (1.0 + d) * (1.0 + d).ln() - d * d.ln()
}

/// Entropy of a thermal oscillator at `βω`, checked against both closed forms.
pub fn thermal_entropy(beta_omega: f64) -> Result<f64> {
    let (a, b) = thermal_entropy_forms(beta_omega)?;
    if (a - b).abs() > FORM_AGREEMENT_TOL {
        return Err(Error::InvalidArgument(format!(
            "closed forms disagree at βω = {beta_omega}: {a} vs {b}"
        )));
    }
    Ok(a)
}

/// `Z = 1/(2 sinh(βω/2))`.
pub fn partition_function(beta_omega: f64) -> f64 {
    1.0 / (2.0 * (0.5 * beta_omega).sinh())
}

/// `Σ_{n<terms} e^{−βω(n+½)}`.
pub fn partition_function_series(beta_omega: f64, terms: usize) -> f64 {
    (0..terms)
        .map(|n| (-beta_omega * (n as f64 + 0.5)).exp())
        .sum()
}

/// Closed-form quantities of two oscillators coupled with angle `theta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TfdPair {
    pub theta: f64,
    pub omega: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    /// Ground-state coefficient `A = −tan(θ/2)`.
    pub a: f64,
    pub t_effective: f64,
    pub c: f64,
    pub s_exact: f64,
    /// `−ln ε + 1 − ε/2` with `ε = 1 − tan²(θ/2)`.
    pub s_approx: f64,
}

pub fn tfd_pair(theta: f64, omega: f64) -> Result<TfdPair> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::InvalidArgument(format!("θ = {theta} outside (0, π/2)")));
    }
    if !(omega > 0.0) {
        return Err(Error::InvalidArgument(format!("ω = {omega} must be positive")));
    }
    let (s, co) = theta.sin_cos();
    let half_tan = (0.5 * theta).tan();
    let beta_omega = -2.0 * half_tan.ln();
    let eps = 1.0 - half_tan * half_tan;
    Ok(TfdPair {
        theta,
        omega,
        omega_plus: omega * (1.0 + s) / co,
        omega_minus: omega * (1.0 - s) / co,
        a: -half_tan,
        t_effective: -omega / (2.0 * half_tan.ln()),
        c: 1.0 / (2.0 * co),
        s_exact: thermal_entropy(beta_omega)?,
        s_approx: -eps.ln() + 1.0 - 0.5 * eps,
    })
}

/// `S(ρ_L)` and its approximation at `points` angles strictly inside `(0, π/2)`.
pub fn tfd_curve(points: usize) -> Result<Vec<TfdPair>> {
    (1..=points)
        .map(|k| tfd_pair(FRAC_PI_2 * k as f64 / (points + 1) as f64, 1.0))
        .collect()
}

pub fn tfd_csv(curve: &[TfdPair]) -> String {
    let mut out = String::from("theta,s_exact,s_approx,t_effective\n");
    for p in curve {
        writeln!(out, "{},{},{},{}", p.theta, p.s_exact, p.s_approx, p.t_effective).unwrap();
    }
    out
}

/// Real symmetric positive-definite coupling matrix of `H = ½Σπ² + ½φᵀKφ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingMatrix {
    k: RMatrix,
}

impl CouplingMatrix {
    pub fn new(k: RMatrix) -> Result<Self> {
        if k.nrows() != k.ncols() || k.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: k.nrows(),
                got: k.ncols(),
            });
        }
        let asym = (&k - k.transpose()).amax();
        if asym > SYMMETRY_TOL {
            return Err(Error::InvalidArgument(format!("K is not symmetric ({asym:e})")));
        }
        if k.clone().cholesky().is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(Self { k })
    }

    pub fn n(&self) -> usize {
        self.k.nrows()
    }

    pub fn matrix(&self) -> &RMatrix {
        &self.k
    }
}

/// `K = ω² [[1 + 2tan²θ, 2tanθ/cosθ], [2tanθ/cosθ, 1 + 2tan²θ]]`.
pub fn tfd_coupling(theta: f64, omega: f64) -> Result<CouplingMatrix> {
    let t = theta.tan();
    let d = omega * omega * (1.0 + 2.0 * t * t);
    let o = omega * omega * 2.0 * t / theta.cos();
    CouplingMatrix::new(RMatrix::from_row_slice(2, 2, &[d, o, o, d]))
}

/// Ground-state two-point functions `X = ⟨φφ⟩ = K^{−1/2}/2`, `P = ⟨ππ⟩ = K^{1/2}/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatorPair {
    pub x: RMatrix,
    pub p: RMatrix,
}

pub fn correlators(k: &CouplingMatrix) -> CorrelatorPair {
    let eig = symmetric_eigen(&k.k);
    CorrelatorPair {
        x: eig.apply_fn(|w| 0.5 / w.sqrt()),
        p: eig.apply_fn(|w| 0.5 * w.sqrt()),
    }
}

fn sub_block(m: &RMatrix, idx: &[usize]) -> RMatrix {
    RMatrix::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])])
}

fn contiguous_block(m: &RMatrix, start: usize, len: usize) -> RMatrix {
    m.view((start, start), (len, len)).clone_owned()
}

// Eigenvalues of X·P through the similar symmetric matrix Lᵀ P L, X = L Lᵀ.
fn symplectic_from_blocks(x: RMatrix, p: &RMatrix) -> Result<Vec<f64>> {
    let l = x
        .cholesky()
        .ok_or(Error::NotPositiveDefinite)?
        .unpack();
    let m = l.transpose() * p * &l;
    let m = (&m + m.transpose()) * 0.5;
    symmetric_eigenvalues(&m)
        .into_iter()
        .map(|mu| {
            let c = mu.max(0.0).sqrt();
            if c < 0.5 - SYMPLECTIC_TOL {
                Err(Error::SymplecticViolation(c))
            } else {
                Ok(c.max(0.5))
            }
        })
        .collect()
}

/// Symplectic eigenvalues `c_k ≥ ½` of the subsystem `keep`.
pub fn symplectic_eigenvalues(pair: &CorrelatorPair, keep: &[usize]) -> Result<Vec<f64>> {
    let n = pair.x.nrows();
    if keep.is_empty() {
        return Ok(Vec::new());
    }
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
    symplectic_from_blocks(sub_block(&pair.x, keep), &sub_block(&pair.p, keep))
}

/// Entanglement entropy (nats) of the oscillators in `keep` in the ground
/// state of `K`.
pub fn subsystem_entropy(k: &CouplingMatrix, keep: &[usize]) -> Result<f64> {
    if keep.is_empty() {
        return Err(Error::InvalidArgument("subsystem must be nonempty".into()));
    }
    let pair = correlators(k);
    Ok(symplectic_eigenvalues(&pair, keep)?
        .into_iter()
        .map(c_entropy)
        .sum())
}

/// Radial lattice coupling for angular momentum `l` on sites `j = 1..=n`:
/// diagonal `((j+½)² + (j−½)² + l(l+1))/j²`, off-diagonal `−(j+½)²/(j(j+1))`.
pub fn radial_k(l: u32, n: usize) -> Result<CouplingMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 sites, got {n}")));
    }
    let ll = l as f64 * (l as f64 + 1.0);
    let mut k = RMatrix::zeros(n, n);
    for i in 0..n {
        let j = (i + 1) as f64;
        k[(i, i)] = ((j + 0.5).powi(2) + (j - 0.5).powi(2) + ll) / (j * j);
        if i + 1 < n {
            let o = -(j + 0.5).powi(2) / (j * (j + 1.0));
            k[(i, i + 1)] = o;
            k[(i + 1, i)] = o;
        }
    }
    CouplingMatrix::new(k)
}

/// How many partial waves to sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LCutoff {
    /// Sum `l = 0..=l_max`.
    Fixed(u32),
    /// Stop at the first `l` whose weighted term is below `tolerance` times
    /// the running sum at every sampled radius; fail past `max_l`.
    Adaptive { tolerance: f64, max_l: u32 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaLawConfig {
    pub n: usize,
    pub cutoff: LCutoff,
    /// Fit uses samples with `lo·R < r < hi·R`, `R = n + ½`.
    pub fit_range: (f64, f64),
    /// Spacing of the sampled `j_max` values.
    pub stride: usize,
}

impl AreaLawConfig {
    pub fn adaptive(n: usize) -> Self {
        Self {
            n,
            cutoff: LCutoff::Adaptive {
                tolerance: 1e-3,
                max_l: 20 * n as u32,
            },
            fit_range: (0.0, 0.975),
            stride: 1,
        }
    }

    pub fn fixed(n: usize, l_max: u32) -> Self {
        Self {
            cutoff: LCutoff::Fixed(l_max),
            ..Self::adaptive(n)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyCurve {
    pub n: usize,
    /// `(r, S)` with `r = j_max + ½`, plus the endpoints `r = 0` and `r = R`.
    pub samples: Vec<(f64, f64)>,
    /// Least-squares `λ` in `S = λ r²` (nats per lattice unit²).
    pub fit_lambda: f64,
    pub fit_range: (f64, f64),
    /// Highest partial wave included.
    pub l_max: u32,
    /// Largest ratio of the last partial wave's term to the running sum.
    pub last_term_ratio: f64,
}

/// Per-`l` entropies (before the `2l+1` weight) at each `j_max`, using the
/// smaller of the inner ball and the outer shell.
fn partial_wave_entropies(l: u32, n: usize, j_maxes: &[usize]) -> Result<Vec<f64>> {
    let pair = correlators(&radial_k(l, n)?);
    j_maxes
        .iter()
        .map(|&m| {
            let (start, len) = if m <= n - m { (0, m) } else { (m, n - m) };
            let x = contiguous_block(&pair.x, start, len);
            let p = contiguous_block(&pair.p, start, len);
            Ok(symplectic_from_blocks(x, &p)?.into_iter().map(c_entropy).sum())
        })
        .collect()
}

/// `λ = Σ S r² / Σ r⁴` over samples inside the fit window.
pub fn fit_area_law(samples: &[(f64, f64)], r_outer: f64, fit_range: (f64, f64)) -> f64 {
    let (lo, hi) = fit_range;
    let (mut num, mut den) = (0.0, 0.0);
    for &(r, s) in samples {
        if r > lo * r_outer && r < hi * r_outer {
            num += s * r * r;
            den += r.powi(4);
        }
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

pub fn area_law_scan(config: &AreaLawConfig) -> Result<EntropyCurve> {
    let n = config.n;
    if n < 2 || config.stride == 0 {
        return Err(Error::InvalidArgument(format!(
            "need n ≥ 2 and stride ≥ 1, got n = {n}, stride = {}",
            config.stride
        )));
    }
    let j_maxes: Vec<usize> = (1..n).step_by(config.stride).collect();
    let mut totals = vec![0.0; j_maxes.len()];
    let mut l: u32 = 0;
    let mut last_ratio;
    loop {
        let weight = 2.0 * l as f64 + 1.0;
        let terms = partial_wave_entropies(l, n, &j_maxes)?;
        last_ratio = 0.0f64;
        for (tot, t) in totals.iter_mut().zip(&terms) {
            *tot += weight * t;
            if *tot > 0.0 {
                last_ratio = last_ratio.max(weight * t / *tot);
            }
        }
        let done = match config.cutoff {
            LCutoff::Fixed(l_max) => l >= l_max,
            LCutoff::Adaptive { tolerance, max_l } => {
                if last_ratio < tolerance && l > 0 {
                    true
                } else if l >= max_l {
                    return Err(Error::InvalidArgument(format!(
                        "partial-wave sum not below tolerance {tolerance} by l = {max_l} (ratio {last_ratio:e})"
                    )));
                } else {
                    false
                }
            }
        };
        if done {
            break;
        }
        l += 1;
    }

    let r_outer = n as f64 + 0.5;
    let mut samples = Vec::with_capacity(j_maxes.len() + 2);
    samples.push((0.0, 0.0));
    samples.extend(j_maxes.iter().zip(&totals).map(|(&m, &s)| (m as f64 + 0.5, s)));
    samples.push((r_outer, 0.0));
    Ok(EntropyCurve {
        n,
        fit_lambda: fit_area_law(&samples, r_outer, config.fit_range),
        samples,
        fit_range: config.fit_range,
        l_max: l,
        last_term_ratio: last_ratio,
    })
}

impl EntropyCurve {
    pub fn csv(&self) -> String {
        let mut out = String::from("r,S\n");
        for (r, s) in &self.samples {
            writeln!(out, "{r},{s}").unwrap();
        }
        out
    }

    /// `{N, l_max, lambda, fit_range, ...}` sidecar.
    pub fn sidecar(&self) -> serde_json::Value {
        serde_json::json!({
            "N": self.n,
            "l_max": self.l_max,
            "lambda": self.fit_lambda,
            "fit_range": [self.fit_range.0, self.fit_range.1],
            "last_term_ratio": self.last_term_ratio,
            "entropy_units": "nats",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff_real;
    use crate::random::random_spd;
    use crate::rng::seeded_rng;

    #[test]
    fn ground_state_limit() {
        assert!(thermal_entropy(50.0).unwrap() < 1e-12);
    }

    #[test]
    fn forms_agree() {
        let (a, b) = thermal_entropy_forms(1.0).unwrap();
        assert!((a - b).abs() < 1e-10);
        // Golden value of the common result.
        assert!((a - 1.040_651_852_256_408_3).abs() < 1e-12);
        assert!(thermal_entropy(0.0).is_err());
        assert!(thermal_entropy(-1.0).is_err());
    }

    #[test]
    fn partition_sum() {
        let z = partition_function(2.0);
        assert!((z - partition_function_series(2.0, 200)).abs() < 1e-12);
    }

    #[test]
    fn tfd_frequencies() {
        let p = tfd_pair(std::f64::consts::PI / 3.0, 1.0).unwrap();
        assert!((p.omega_plus - (2.0 + 3f64.sqrt())).abs() < 1e-12);
        assert!((p.omega_minus - (2.0 - 3f64.sqrt())).abs() < 1e-12);
        let phi = 0.25 * (1.0 / p.omega_plus + 1.0 / p.omega_minus);
        let pi = 0.25 * (p.omega_plus + p.omega_minus);
        assert!(((phi * pi).sqrt() - p.c).abs() < 1e-12);
        assert!((c_entropy(p.c) - p.s_exact).abs() < 1e-10);
        assert!(tfd_pair(0.0, 1.0).is_err());
        assert!(tfd_pair(FRAC_PI_2, 1.0).is_err());
    }

    #[test]
    fn tfd_approximation_converges() {
        let mut prev = f64::INFINITY;
        for theta in [1.4, 1.5, 1.55, 1.565, 1.57] {
            let p = tfd_pair(theta, 1.0).unwrap();
            let gap = (p.s_exact - p.s_approx).abs();
            assert!(gap < prev);
            prev = gap;
        }
        assert!(prev < 1e-5);
    }

    #[test]
    fn identity_coupling() {
        let k = CouplingMatrix::new(RMatrix::identity(3, 3)).unwrap();
        let c = correlators(&k);
        assert!(max_abs_diff_real(&c.x, &(RMatrix::identity(3, 3) * 0.5)) < 1e-15);
        assert!(max_abs_diff_real(&c.p, &(RMatrix::identity(3, 3) * 0.5)) < 1e-15);
    }

    #[test]
    fn functional_calculus() {
        let mut rng = seeded_rng(31);
        for n in 2..8 {
            let k = CouplingMatrix::new(random_spd(n, 0.5, &mut rng)).unwrap();
            let c = correlators(&k);
            let prod = (&c.x * 2.0) * (&c.p * 2.0);
            assert!(max_abs_diff_real(&prod, &RMatrix::identity(n, n)) < 1e-9);
        }
    }

    #[test]
    fn two_oscillator_pipeline() {
        let k = tfd_coupling(1.0, 1.0).unwrap();
        let s = subsystem_entropy(&k, &[0]).unwrap();
        assert!((s - tfd_pair(1.0, 1.0).unwrap().s_exact).abs() < 1e-8);
    }

    #[test]
    fn complement_and_full() {
        let mut rng = seeded_rng(32);
        let k = CouplingMatrix::new(random_spd(6, 0.3, &mut rng)).unwrap();
        assert!(subsystem_entropy(&k, &[0, 1, 2, 3, 4, 5]).unwrap() < 1e-9);
        let a = subsystem_entropy(&k, &[1, 4]).unwrap();
        let b = subsystem_entropy(&k, &[0, 2, 3, 5]).unwrap();
        assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn radial_k_small() {
        let k = radial_k(0, 2).unwrap();
        let expected = RMatrix::from_row_slice(2, 2, &[2.5, -1.125, -1.125, 2.125]);
        assert!(max_abs_diff_real(k.matrix(), &expected) < 1e-15);
        assert!(radial_k(0, 1).is_err());
    }

    #[test]
    fn radial_k_positive() {
        for l in [0, 1, 10, 100] {
            for n in [10, 60, 200] {
                let k = radial_k(l, n).unwrap();
                assert!(symmetric_eigenvalues(k.matrix())[0] > 0.0);
            }
        }
    }

    #[test]
    fn small_scan_shape() {
        let curve = area_law_scan(&AreaLawConfig::fixed(12, 20)).unwrap();
        assert_eq!(curve.samples.first(), Some(&(0.0, 0.0)));
        assert_eq!(curve.samples.last(), Some(&(12.5, 0.0)));
        assert!(curve.samples.iter().all(|&(_, s)| s >= 0.0));
        assert!(curve.fit_lambda > 0.0);
        assert!(curve.csv().starts_with("r,S\n0,0\n1.5,"));
    }
}
