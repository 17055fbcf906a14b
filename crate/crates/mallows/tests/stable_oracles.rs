//! Distributional checks for the stable sampler: closed-form special cases
//! and the exact rescaling identity for sums.

use mallows::stable_law::StableParams;
use mallows::stats::{ks_critical_value, ks_statistic};
use statrs::function::erf::erfc;

/// One-sample KS against a closed-form CDF.
fn ks_against_cdf(draws: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut max_gap = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let lower = i as f64 / n;
        let upper = (i + 1) as f64 / n;
        max_gap = max_gap.max((f - lower).abs()).max((upper - f).abs());
    }
    max_gap
}

#[test]
fn levy_branch_matches_closed_form_cdf() {
    // S(0.5, 1, 1, 0) is the standard Levy law: CDF erfc(sqrt(1/(2x))).
    let params = StableParams::new(0.5, 1.0, 1.0, 0.0).unwrap();
    let draws = params.sample(100_000, 1234).unwrap();
    let negative = draws.iter().filter(|x| **x <= 0.0).count();
    assert_eq!(negative, 0, "Levy draws must be positive");
    let stat = ks_against_cdf(&draws, |x| {
        if x <= 0.0 {
            0.0
        } else {
            erfc((1.0 / (2.0 * x)).sqrt())
        }
    });
    // One-sample critical value at the 0.01 level: 1.6276 / sqrt(n).
    let critical = 1.6276 / (draws.len() as f64).sqrt();
    assert!(stat < critical, "KS {stat} >= {critical}");
}

#[test]
fn cauchy_branch_matches_closed_form_cdf() {
    let params = StableParams::new(1.0, 1.0, 0.0, 0.0).unwrap();
    let draws = params.sample(100_000, 99).unwrap();
    let stat = ks_against_cdf(&draws, |x| 0.5 + x.atan() / std::f64::consts::PI);
    let critical = 1.6276 / (draws.len() as f64).sqrt();
    assert!(stat < critical, "KS {stat} >= {critical}");
}

/// The identity `n^{-1/alpha} sum Y_i =_d Y + s(n)`: rescaled-and-shifted
/// sums against direct draws, two-sample KS at the 0.01 level.
fn check_rescaling(alpha: f64, beta: f64, sigma: f64, mu: f64, n: usize, seed: u64) {
    let params = StableParams::new(alpha, sigma, beta, mu).unwrap();
    let replicates = 20_000;
    let shift = params.sum_shift(n as u64);
    let scale = (n as f64).powf(-1.0 / alpha);
    let draws = params.sample(replicates * n, seed).unwrap();
    let sums: Vec<f64> = draws
        .chunks_exact(n)
        .map(|chunk| scale * chunk.iter().sum::<f64>() - shift)
        .collect();
    let direct = params.sample(replicates, seed ^ 0xD1CE).unwrap();
    let stat = ks_statistic(&sums, &direct);
    let critical = ks_critical_value(replicates, replicates, 0.01);
    assert!(
        stat < critical,
        "alpha={alpha} beta={beta}: KS {stat} >= {critical}"
    );
}

#[test]
fn rescaling_identity_symmetric() {
    check_rescaling(1.5, 0.0, 1.0, 0.3, 10, 41);
}

#[test]
fn rescaling_identity_skewed_sub_case() {
    check_rescaling(0.7, 0.5, 1.0, 0.3, 10, 43);
}

#[test]
fn rescaling_identity_alpha_one_fully_skewed() {
    check_rescaling(1.0, 1.0, 1.0, 0.3, 10, 47);
}

#[test]
fn rescaling_identity_nonunit_scale() {
    check_rescaling(1.3, -0.7, 2.5, -1.0, 7, 53);
}

#[test]
fn rescaling_identity_alpha_one_nonunit_scale() {
    // Exercises the sigma log sigma correction in the alpha = 1 sampler.
    check_rescaling(1.0, 0.5, 2.0, 0.3, 10, 59);
}
