//! Shared oracles for the integration suites. These stay independent of the
//! library's search structures: plain double loops and textbook quadrature.

use voronoi_class::geometry::Point;

/// Exhaustive nearest-point count: for each reference point, scan every
/// training point and keep the strictly closest (squared distance), which
/// resolves ties to the lowest index.
pub fn brute_force_counts(training: &[Point], reference: &[Point]) -> Vec<u64> {
    let mut counts = vec![0u64; training.len()];
    for u in reference {
        let mut best = (f64::INFINITY, usize::MAX);
        for (j, x) in training.iter().enumerate() {
            let d2 = u.dist2(x);
            if d2 < best.0 {
                best = (d2, j);
            }
        }
        counts[best.1] += 1;
    }
    counts
}

/// Kolmogorov-Smirnov distance between a sample and a CDF.
pub fn ks_distance(sample: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sample.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    d
}

/// Trapezoid rule with `n` panels.
pub fn trapezoid(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut sum = 0.5 * (f(lo) + f(hi));
    for i in 1..n {
        sum += f(lo + i as f64 * h);
    }
    sum * h
}

/// Mean of a slice.
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}
