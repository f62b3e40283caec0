//! Shannon entropy, the single-bit readout channel and Bayesian updates.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::xlogx;

const SUM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    probabilities: Vec<f64>,
}

impl Distribution {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        if let Some(p) = probabilities.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(Error::InvalidDistribution(format!("entry {p} is not a probability")));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!("entries sum to {sum}")));
        }
        Ok(Self { probabilities })
    }

    pub fn binary(p0: f64) -> Result<Self> {
        Self::new(vec![p0, 1.0 - p0])
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    fn require_binary(&self) -> Result<(f64, f64)> {
        match self.probabilities.as_slice() {
            [a, b] => Ok((*a, *b)),
            p => Err(Error::InvalidDistribution(format!(
                "expected a distribution over one bit, got {} outcomes",
                p.len()
            ))),
        }
    }
}

/// `−Σ p log₂ p`.
pub fn shannon_entropy(d: &Distribution) -> f64 {
    (-d.probabilities.iter().map(|&p| xlogx(p, f64::log2)).sum::<f64>()).max(0.0)
}

/// Readout that reports the stored bit with probability `mu` and flips it
/// otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BitFlipNoise {
    mu: f64,
}

impl BitFlipNoise {
    pub fn new(mu: f64) -> Result<Self> {
        if !(0.5..=1.0).contains(&mu) {
            return Err(Error::InvalidNoise(mu));
        }
        Ok(Self { mu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `P(y | x)`.
    pub fn likelihood(&self, y: u8, x: u8) -> f64 {
        if y == x {
            self.mu
        } else {
            1.0 - self.mu
        }
    }
}

/// `P(y=0) = μP(x=0) + (1−μ)P(x=1)` and its complement.
pub fn readout_distribution(prior: &Distribution, noise: BitFlipNoise) -> Result<Distribution> {
    let (p0, p1) = prior.require_binary()?;
    let mu = noise.mu;
    let y0 = mu * p0 + (1.0 - mu) * p1;
    let y1 = (1.0 - mu) * p0 + mu * p1;
    Ok(Distribution {
        probabilities: vec![y0, y1],
    })
}

/// `P(x | y) = P(y | x) P(x) / P(y)`.
pub fn bayes_posterior(prior: &Distribution, noise: BitFlipNoise, y: u8) -> Result<Distribution> {
    if y > 1 {
        return Err(Error::InvalidArgument(format!("readout bit {y}")));
    }
    let (p0, p1) = prior.require_binary()?;
    let j0 = noise.likelihood(y, 0) * p0;
    let j1 = noise.likelihood(y, 1) * p1;
    let evidence = j0 + j1;
    if evidence <= 0.0 {
        return Err(Error::ZeroEvidence);
    }
    Ok(Distribution {
        probabilities: vec![j0 / evidence, j1 / evidence],
    })
}

/// Entropy of a biased coin at `points` equally spaced `p` in `[0, 1]`.
pub fn coinflip_curve(points: usize) -> Vec<(f64, f64)> {
    (0..points)
        .map(|k| {
            let p = if points == 1 { 0.0 } else { k as f64 / (points - 1) as f64 };
            let d = Distribution {
                probabilities: vec![p, 1.0 - p],
            };
            (p, shannon_entropy(&d))
        })
        .collect()
}

pub const COINFLIP_POINTS: usize = 101;

pub fn coinflip_csv(curve: &[(f64, f64)]) -> String {
    let mut out = String::from("p,entropy\n");
    for (p, s) in curve {
        writeln!(out, "{p},{s}").unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(p: &[f64]) -> Distribution {
        Distribution::new(p.to_vec()).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(shannon_entropy(&d(&[0.5, 0.5])), 1.0);
        assert_eq!(shannon_entropy(&d(&[1.0, 0.0])), 0.0);
        for n in 1..6 {
            let u = Distribution::uniform(1 << n).unwrap();
            assert!((shannon_entropy(&u) - n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_inputs() {
        assert!(Distribution::new(vec![0.5, 0.6]).is_err());
        assert!(Distribution::new(vec![-0.1, 1.1]).is_err());
        assert!(Distribution::new(vec![f64::NAN, 1.0]).is_err());
        assert!(BitFlipNoise::new(0.4).is_err());
        assert!(BitFlipNoise::new(1.01).is_err());
        let n = BitFlipNoise::new(1.0).unwrap();
        assert_eq!(bayes_posterior(&d(&[1.0, 0.0]), n, 1), Err(Error::ZeroEvidence));
        assert!(readout_distribution(&d(&[0.2, 0.3, 0.5]), n).is_err());
    }

    #[test]
    fn readout_examples() {
        let n9 = BitFlipNoise::new(0.9).unwrap();
        let r = readout_distribution(&d(&[1.0, 0.0]), n9).unwrap();
        assert!((r.probabilities()[0] - 0.9).abs() < 1e-15);
        let r = readout_distribution(&d(&[0.5, 0.5]), n9).unwrap();
        assert_eq!(r.probabilities(), &[0.5, 0.5]);
        let n8 = BitFlipNoise::new(0.8).unwrap();
        let r = readout_distribution(&d(&[0.3, 0.7]), n8).unwrap();
        assert!((r.probabilities()[0] - 0.38).abs() < 1e-15);
        assert!((r.probabilities()[1] - 0.62).abs() < 1e-15);
    }

    #[test]
    fn posterior_examples() {
        let n8 = BitFlipNoise::new(0.8).unwrap();
        let post = bayes_posterior(&d(&[0.3, 0.7]), n8, 1).unwrap();
        assert!((post.probabilities()[0] - 0.06 / 0.62).abs() < 1e-15);
        assert!((post.probabilities()[1] - 0.56 / 0.62).abs() < 1e-15);

        let exact = BitFlipNoise::new(1.0).unwrap();
        assert_eq!(bayes_posterior(&d(&[0.4, 0.6]), exact, 0).unwrap().probabilities(), &[1.0, 0.0]);

        let useless = BitFlipNoise::new(0.5).unwrap();
        for y in 0..2 {
            let post = bayes_posterior(&d(&[0.3, 0.7]), useless, y).unwrap();
            assert!((post.probabilities()[0] - 0.3).abs() < 1e-15);
        }
    }

    #[test]
    fn coinflip_grid() {
        let c = coinflip_curve(COINFLIP_POINTS);
        assert_eq!(c.len(), 101);
        assert_eq!(c[50], (0.5, 1.0));
        assert_eq!(c[0].1, 0.0);
        assert_eq!(c[100], (1.0, 0.0));
        assert!(coinflip_csv(&c).starts_with("p,entropy\n0,0\n0.01,"));
    }
}
