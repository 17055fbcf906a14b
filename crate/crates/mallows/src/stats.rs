//! Small statistical helpers shared by the harness and the test suites:
//! two-sample Kolmogorov-Smirnov statistic and robust location summaries.

/// Two-sample KS statistic `sup_x |F_m(x) - G_n(x)|`.
///
/// Inputs need not be sorted; copies are sorted internally.
pub fn ks_statistic(xs: &[f64], ys: &[f64]) -> f64 {
    assert!(!xs.is_empty() && !ys.is_empty());
    let mut xs = xs.to_vec();
    let mut ys = ys.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (m, n) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut max_gap = 0.0f64;
    while i < xs.len() && j < ys.len() {
        let x = xs[i];
        let y = ys[j];
        if x <= y {
            i += 1;
        }
        if y <= x {
            j += 1;
        }
        let gap = (i as f64 / m - j as f64 / n).abs();
        max_gap = max_gap.max(gap);
    }
    // Once one sample is exhausted its CDF sits at 1 and the running gap
    // only shrinks, so the loop has already seen the supremum.
    max_gap
}

/// Asymptotic two-sample KS critical value at significance `level`:
/// `c(level) * sqrt((m + n) / (m n))` with `c = sqrt(-ln(level/2)/2)`.
pub fn ks_critical_value(m: usize, n: usize, level: f64) -> f64 {
    assert!(level > 0.0 && level < 1.0);
    let c = (-(level / 2.0).ln() / 2.0).sqrt();
    c * (((m + n) as f64) / ((m * n) as f64)).sqrt()
}

/// Median of a slice (not required to be sorted).
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty());
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

/// Sample mean.
pub fn mean(values: &[f64]) -> f64 {
    assert!(!values.is_empty());
    values.iter().sum::<f64>() / values.len() as f64
}

/// Standard error of the mean from sample dispersion; 0 for a single value.
pub fn standard_error(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(values);
    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n as f64 - 1.0);
    (var / n as f64).sqrt()
}
