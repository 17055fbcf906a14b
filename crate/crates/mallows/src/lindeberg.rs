#![doc = include_str!("../../../book/src/lindeberg.md")]

use serde::{Deserialize, Serialize};

use crate::coupling::PairSample;
use crate::stable_law::validate_alpha;
use crate::transport::DiscreteLaw;
use crate::{Error, Result};

/// The truncation exponent `delta = (2 - alpha) / (2 alpha)`: the corrected
/// condition truncates at `b n^delta` instead of a fixed `b`.
pub fn delta(alpha: f64) -> Result<f64> {
    validate_alpha(alpha)?;
    Ok((2.0 - alpha) / (2.0 * alpha))
}

/// The growing threshold `b n^delta`.
pub fn corrected_threshold(alpha: f64, n: usize, b: f64) -> Result<f64> {
    if b <= 0.0 || !b.is_finite() {
        return Err(Error::NonPositiveThreshold(b));
    }
    Ok(b * (n as f64).powf(delta(alpha)?))
}

/// Monte Carlo realization of the corrected condition:
/// `(1/n) sum_i |x_i - y_i|^alpha 1(|x_i - y_i| > b n^delta)`.
pub fn lindeberg_sum_corrected(pairs: &PairSample, b: f64) -> Result<f64> {
    let threshold = corrected_threshold(pairs.alpha(), pairs.n(), b)?;
    Ok(truncated_power_sum(pairs, threshold))
}

/// Monte Carlo realization of the original (flawed) condition, with the
/// fixed threshold `b`: `(1/n) sum_i |x_i - y_i|^alpha 1(|x_i - y_i| > b)`.
/// Kept as a diagnostic; it dominates the corrected sum pointwise.
pub fn lindeberg_sum_original(pairs: &PairSample, b: f64) -> Result<f64> {
    if b <= 0.0 || !b.is_finite() {
        return Err(Error::NonPositiveThreshold(b));
    }
    Ok(truncated_power_sum(pairs, b))
}

fn truncated_power_sum(pairs: &PairSample, threshold: f64) -> f64 {
    let alpha = pairs.alpha();
    pairs
        .gaps()
        .filter(|g| g.abs() > threshold)
        .map(|g| g.abs().powf(alpha))
        .sum::<f64>()
        / pairs.n() as f64
}

/// Exact-mode corrected sum from tabulated per-i gap laws (cycled when
/// `laws.len() < n`): `(1/n) sum_i E{|G_i|^alpha 1(|G_i| > b n^delta)}`.
pub fn lindeberg_sum_corrected_exact(
    laws: &[DiscreteLaw],
    alpha: f64,
    n: usize,
    b: f64,
) -> Result<f64> {
    let threshold = corrected_threshold(alpha, n, b)?;
    exact_truncated_expectation(laws, alpha, n, threshold)
}

/// Exact-mode original sum: fixed threshold `b`.
pub fn lindeberg_sum_original_exact(
    laws: &[DiscreteLaw],
    alpha: f64,
    n: usize,
    b: f64,
) -> Result<f64> {
    if b <= 0.0 || !b.is_finite() {
        return Err(Error::NonPositiveThreshold(b));
    }
    validate_alpha(alpha)?;
    exact_truncated_expectation(laws, alpha, n, b)
}

fn exact_truncated_expectation(
    laws: &[DiscreteLaw],
    alpha: f64,
    n: usize,
    threshold: f64,
) -> Result<f64> {
    if laws.is_empty() {
        return Err(Error::InvalidModel("no gap laws".into()));
    }
    if n == 0 {
        return Err(Error::EmptyCount);
    }
    let sum: f64 = (0..n)
        .map(|i| laws[i % laws.len()].abs_moment_above(threshold, alpha))
        .sum();
    Ok(sum / n as f64)
}

/// The U/V decomposition of the gaps at threshold `b n^delta`:
/// `u_i = g_i 1(|g_i| <= t)`, `v_i = g_i 1(|g_i| > t)`, so `u_i + v_i = g_i`
/// with at most one of the two nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationSplit {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub threshold: f64,
}

pub fn truncation_split(pairs: &PairSample, b: f64) -> Result<TruncationSplit> {
    let threshold = corrected_threshold(pairs.alpha(), pairs.n(), b)?;
    let mut u = Vec::with_capacity(pairs.n());
    let mut v = Vec::with_capacity(pairs.n());
    for g in pairs.gaps() {
        if g.abs() <= threshold {
            u.push(g);
            v.push(0.0);
        } else {
            u.push(0.0);
            v.push(g);
        }
    }
    Ok(TruncationSplit { u, v, threshold })
}

/// One grid point of a Lindeberg report: the corrected sum `L2` with
/// threshold `b n^delta` and the original sum `L1` with threshold `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LindebergRow {
    pub b: f64,
    pub l2: f64,
    pub l1: f64,
}

/// `L_n(b)` over a grid of `b`, for one `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LindebergReport {
    pub n: usize,
    pub alpha: f64,
    pub rows: Vec<LindebergRow>,
}

impl LindebergReport {
    /// Evaluate both conditions over `b_grid` from realized pairs.
    pub fn from_pairs(pairs: &PairSample, b_grid: &[f64]) -> Result<Self> {
        let rows = b_grid
            .iter()
            .map(|&b| {
                Ok(LindebergRow {
                    b,
                    l2: lindeberg_sum_corrected(pairs, b)?,
                    l1: lindeberg_sum_original(pairs, b)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n: pairs.n(), alpha: pairs.alpha(), rows })
    }

    /// Evaluate both conditions exactly from tabulated gap laws.
    pub fn from_laws(
        laws: &[DiscreteLaw],
        alpha: f64,
        n: usize,
        b_grid: &[f64],
    ) -> Result<Self> {
        let rows = b_grid
            .iter()
            .map(|&b| {
                Ok(LindebergRow {
                    b,
                    l2: lindeberg_sum_corrected_exact(laws, alpha, n, b)?,
                    l1: lindeberg_sum_original_exact(laws, alpha, n, b)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, alpha, rows })
    }
}
