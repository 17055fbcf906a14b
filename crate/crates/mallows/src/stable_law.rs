#![doc = include_str!("../../../book/src/stable-laws.md")]

use std::f64::consts::{FRAC_PI_2, PI};

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::rng::{stream, Domain};
use crate::{Error, Result};

/// Alphas closer to 1 than this are treated as exactly 1 to avoid
/// catastrophic cancellation in `n^{1-1/alpha} - 1` and in the sampler's
/// alpha = 1 branch.
pub const ALPHA_ONE_TOLERANCE: f64 = 1e-9;

/// Parameters of a stable law S(alpha, sigma, beta, mu):
/// stability index, scale, skewness, shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableParams {
    pub alpha: f64,
    pub sigma: f64,
    pub beta: f64,
    pub mu: f64,
}

/// Checks that a stability index lies in (0, 2); used wherever an alpha
/// appears on its own (distances, Lindeberg sums).
pub fn validate_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) || !alpha.is_finite() {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    Ok(alpha)
}

impl StableParams {
    /// Validated constructor. The index must lie strictly inside (0, 2):
    /// the Gaussian boundary alpha = 2 is rejected.
    pub fn new(alpha: f64, sigma: f64, beta: f64, mu: f64) -> Result<Self> {
        validate_alpha(alpha)?;
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::SigmaNegative(sigma));
        }
        if !(-1.0..=1.0).contains(&beta) || !beta.is_finite() {
            return Err(Error::BetaOutOfRange(beta));
        }
        if !mu.is_finite() {
            return Err(Error::Numeric(format!("non-finite mu: {mu}")));
        }
        Ok(Self { alpha, sigma, beta, mu })
    }

    /// Whether this law is handled by the alpha = 1 branch.
    pub fn is_alpha_one(&self) -> bool {
        (self.alpha - 1.0).abs() < ALPHA_ONE_TOLERANCE
    }

    /// One draw using the generator `rng`.
    ///
    /// Chambers-Mallows-Stuck in the 1-parameterization: a standard draw
    /// Z ~ S(alpha, 1, beta, 0) is built from a uniform angle on
    /// (-pi/2, pi/2) and a unit exponential, then scaled and shifted. For
    /// alpha = 1 the scale step needs the extra `(2/pi) beta sigma log sigma`
    /// correction so that the result is S(1, sigma, beta, mu) in the same
    /// parameterization.
    pub fn sample_one(&self, rng: &mut impl RngCore) -> f64 {
        let v = PI * (unit_open(rng) - 0.5);
        let w = -unit_open(rng).ln();
        let z = if self.is_alpha_one() {
            standard_cms_alpha_one(self.beta, v, w)
        } else {
            standard_cms(self.alpha, self.beta, v, w)
        };
        if self.is_alpha_one() {
            let log_scale = if self.sigma > 0.0 { self.sigma.ln() } else { 0.0 };
            self.sigma * z + (2.0 / PI) * self.beta * self.sigma * log_scale + self.mu
        } else {
            self.sigma * z + self.mu
        }
    }

    /// `count` i.i.d. draws, fully determined by `seed`.
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(Error::EmptyCount);
        }
        let mut rng = stream(seed, Domain::Sample, 0);
        Ok((0..count).map(|_| self.sample_one(&mut rng)).collect())
    }

    /// The shift s(n) in the exact rescaling identity
    /// `n^{-1/alpha} (Y_1 + ... + Y_n) =_d Y + s(n)`:
    ///
    /// - `s(n) = mu (n^{1-1/alpha} - 1)` for alpha != 1,
    /// - `s(n) = (2/pi) sigma beta log n` for alpha = 1.
    pub fn sum_shift(&self, n: u64) -> f64 {
        assert!(n >= 1, "n must be at least 1");
        let n = n as f64;
        if self.is_alpha_one() {
            (2.0 / PI) * self.sigma * self.beta * n.ln()
        } else {
            self.mu * (n.powf(1.0 - 1.0 / self.alpha) - 1.0)
        }
    }
}

/// Uniform on the open interval (0, 1); never returns an endpoint, so logs
/// and tangents below stay finite.
fn unit_open(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Standard CMS transform, alpha != 1: Z ~ S(alpha, 1, beta, 0).
fn standard_cms(alpha: f64, beta: f64, v: f64, w: f64) -> f64 {
    let half_pi_alpha = FRAC_PI_2 * alpha;
    let t = beta * half_pi_alpha.tan();
    let b = t.atan() / alpha;
    let s = (1.0 + t * t).powf(1.0 / (2.0 * alpha));
    let scaled = alpha * (v + b);
    s * scaled.sin() / v.cos().powf(1.0 / alpha)
        * ((v - scaled).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Standard CMS transform, alpha = 1 branch: Z ~ S(1, 1, beta, 0).
fn standard_cms_alpha_one(beta: f64, v: f64, w: f64) -> f64 {
    let shifted = FRAC_PI_2 + beta * v;
    (2.0 / PI) * (shifted * v.tan() - beta * (FRAC_PI_2 * w * v.cos() / shifted).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_interior_point() {
        assert!(StableParams::new(1.5, 1.0, 0.0, 0.0).is_ok());
    }

    #[test]
    fn rejects_alpha_two() {
        match StableParams::new(2.0, 1.0, 0.0, 0.0) {
            Err(Error::AlphaOutOfRange(a)) => assert_eq!(a, 2.0),
            other => panic!("expected alpha error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_negative_sigma() {
        assert!(matches!(
            StableParams::new(1.0, -1.0, 0.0, 0.0),
            Err(Error::SigmaNegative(_))
        ));
    }

    #[test]
    fn rejects_bad_beta() {
        assert!(matches!(
            StableParams::new(1.0, 1.0, 1.5, 0.0),
            Err(Error::BetaOutOfRange(_))
        ));
    }

    #[test]
    fn sampling_is_deterministic_in_seed() {
        let p = StableParams::new(1.3, 2.0, 0.4, -1.0).unwrap();
        let a = p.sample(256, 99).unwrap();
        let b = p.sample(256, 99).unwrap();
        assert_eq!(a, b);
        let c = p.sample(256, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn cauchy_mass_of_unit_interval_is_one_half() {
        // Standard Cauchy: P(|Y| <= 1) = (1/pi)(arctan 1 - arctan(-1)) = 1/2.
        let p = StableParams::new(1.0, 1.0, 0.0, 0.0).unwrap();
        let draws = p.sample(1_000_000, 5).unwrap();
        let inside = draws.iter().filter(|x| x.abs() <= 1.0).count();
        let frac = inside as f64 / draws.len() as f64;
        assert!((frac - 0.5).abs() < 0.002, "fraction {frac}");
    }

    #[test]
    fn sum_shift_examples() {
        let p = StableParams::new(1.5, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(p.sum_shift(10), 0.0);

        let p = StableParams::new(0.5, 1.0, 0.0, 1.0).unwrap();
        assert!((p.sum_shift(4) - (-0.75)).abs() < 1e-15);

        // alpha = 1, n = 23 ~ e^pi: shift is (2/pi) log n, close to 2.
        let p = StableParams::new(1.0, 1.0, 1.0, 0.0).unwrap();
        assert!((p.sum_shift(23) - (2.0 / PI) * 23f64.ln()).abs() < 1e-15);
        assert!((p.sum_shift(23) - 2.0).abs() < 0.01);

        for params in [
            StableParams::new(0.7, 2.0, 0.5, 3.0).unwrap(),
            StableParams::new(1.0, 2.0, 0.5, 3.0).unwrap(),
            StableParams::new(1.8, 0.5, -1.0, -2.0).unwrap(),
        ] {
            assert_eq!(params.sum_shift(1), 0.0);
        }
    }

    #[test]
    fn alpha_near_one_uses_the_one_branch() {
        let p = StableParams::new(1.0 + 1e-12, 1.0, 0.5, 0.0).unwrap();
        assert!(p.is_alpha_one());
        // n^{1-1/alpha} - 1 would be ~1e-12 noise; the branch gives the
        // log-n form instead.
        let q = StableParams::new(1.0, 1.0, 0.5, 0.0).unwrap();
        assert_eq!(p.sum_shift(100), q.sum_shift(100));
    }
}
