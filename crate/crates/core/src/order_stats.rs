//! Order-statistics spacing results and their Monte Carlo verification.
//!
//! For `n` i.i.d. uniforms, the scaled spacing `T = (n/m) * (U_(r+m) - U_(r))`
//! has mean `n/(n+1)` and variance `n^2 (n-m+1) / (m (n+1)^2 (n+2))` — both
//! free of `r` — so it estimates 1 with variance tending to `1/m`. Mapped
//! through a distribution `F` with positive density `f` at the `q`-quantile
//! `x0`, the spacing `S = (n/m) * (X_(r+m) - X_(r))` around `r ~ q*n`
//! estimates `1/f(x0)` with variance tending to `1/(m f(x0)^2)`. These are
//! exactly the moments a one-cell density estimate inherits, and why clubbing
//! `k` cells divides its variance by roughly `k`.
//!
//! The closed forms come from the uniform order-statistic moments
//! `E[U_(i)] = i/(n+1)` and `E[U_(i) U_(j)] = i (j+1) / ((n+1)(n+2))`.

use rayon::prelude::*;

use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::rng::{derive_seed, rng_from_seed};
use rand::Rng;

/// `E[U_(i)] = i / (n+1)` for the i-th of n uniform order statistics.
pub fn expected_uniform_order_stat(n: usize, i: usize) -> Result<f64> {
    if i < 1 || i > n {
        return Err(Error::InvalidParameter(format!("index must satisfy 1 <= i <= {n}, got {i}")));
    }
    Ok(i as f64 / (n + 1) as f64)
}

/// `E[U_(i) U_(j)] = i (j+1) / ((n+1)(n+2))` for `i <= j`; `i = j` gives the
/// second moment `E[U_(i)^2]`.
pub fn expected_uniform_product(n: usize, i: usize, j: usize) -> Result<f64> {
    if i < 1 || j < i || j > n {
        return Err(Error::InvalidParameter(format!(
            "indices must satisfy 1 <= i <= j <= {n}, got ({i}, {j})"
        )));
    }
    Ok((i as f64 * (j + 1) as f64) / ((n + 1) as f64 * (n + 2) as f64))
}

/// Exact mean and variance of the scaled uniform spacing
/// `T = (n/m) * (U_(r+m) - U_(r))`. Both are free of `r`; the mean tends to 1
/// and the variance to `1/m`.
pub fn spacing_moments_uniform(n: usize, m: usize) -> Result<(f64, f64)> {
    if m < 1 || m >= n {
        return Err(Error::InvalidParameter(format!("gap must satisfy 1 <= m < {n}, got {m}")));
    }
    let (nf, mf) = (n as f64, m as f64);
    let mean = nf / (nf + 1.0);
    let var = nf * nf * (nf - mf + 1.0) / (mf * (nf + 1.0).powi(2) * (nf + 2.0));
    Ok((mean, var))
}

/// Empirical-versus-theoretical moment comparison for a spacing statistic.
#[derive(Debug, Clone)]
pub struct MomentReport {
    pub n: usize,
    pub m: usize,
    /// Lower order-statistic index the spacing starts at (1-based).
    pub r: usize,
    pub replications: usize,
    pub empirical_mean: f64,
    pub empirical_var: f64,
    pub theoretical_mean: f64,
    pub theoretical_var: f64,
    /// Standard error of the empirical mean.
    pub mean_se: f64,
    /// Asymptotic standard error of the empirical variance (fourth-moment based).
    pub var_se: f64,
    pub mean_z: f64,
    pub var_z: f64,
    pub mean_pass: bool,
    pub var_pass: bool,
}

impl MomentReport {
    pub const CSV_HEADER: &'static str =
        "n,m,r,replications,emp_mean,th_mean,emp_var,th_var,mean_z,var_pass";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.m,
            self.r,
            self.replications,
            self.empirical_mean,
            self.theoretical_mean,
            self.empirical_var,
            self.theoretical_var,
            self.mean_z,
            self.var_pass
        )
    }

    pub fn agrees(&self) -> bool {
        self.mean_pass && self.var_pass
    }
}

/// Simulated spacing values -> moment summary against theory targets.
///
/// `within_rel` additionally accepts deviations below that relative size, for
/// asymptotic targets that finite `n` can only approach.
fn summarise(
    values: &[f64],
    n: usize,
    m: usize,
    r: usize,
    th_mean: f64,
    th_var: f64,
    within_rel: f64,
) -> MomentReport {
    let reps = values.len();
    let rf = reps as f64;
    let mean = values.iter().sum::<f64>() / rf;
    let mut m2 = 0.0;
    let mut m4 = 0.0;
    for v in values {
        let d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    let var = m2 / (rf - 1.0);
    m4 /= rf;
    let mean_se = (var / rf).sqrt();
    let var_se = ((m4 - var * var).max(0.0) / rf).sqrt();
    let mean_z = (mean - th_mean) / mean_se;
    let var_z = (var - th_var) / var_se;
    let mean_pass =
        mean_z.abs() <= 4.0 || (mean - th_mean).abs() <= within_rel * th_mean.abs();
    let var_pass = var_z.abs() <= 4.0 || (var - th_var).abs() <= within_rel * th_var.abs();
    MomentReport {
        n,
        m,
        r,
        replications: reps,
        empirical_mean: mean,
        empirical_var: var,
        theoretical_mean: th_mean,
        theoretical_var: th_var,
        mean_se,
        var_se,
        mean_z,
        var_z,
        mean_pass,
        var_pass,
    }
}

fn check_spacing_indices(n: usize, r: usize, m: usize, replications: usize) -> Result<()> {
    if m < 1 || r < 1 || r + m > n {
        return Err(Error::InvalidParameter(format!(
            "spacing indices must satisfy 1 <= r and r + m <= n, got n={n}, r={r}, m={m}"
        )));
    }
    if replications < 1000 {
        return Err(Error::InvalidParameter(format!(
            "need at least 1000 replications, got {replications}"
        )));
    }
    Ok(())
}

/// Simulate `T = (n/m) (U_(r+m) - U_(r))` and compare both moments with the
/// closed forms, flagging agreement within 4 standard errors.
///
/// Replications run in parallel; each draws from its own seed derived from
/// the master seed, so results are identical at any thread count.
pub fn verify_uniform_spacing(
    n: usize,
    r: usize,
    m: usize,
    replications: usize,
    seed: u64,
) -> Result<MomentReport> {
    check_spacing_indices(n, r, m, replications)?;
    let (th_mean, th_var) = spacing_moments_uniform(n, m)?;
    let values: Vec<f64> = (0..replications)
        .into_par_iter()
        .map(|rep| {
            let mut rng = rng_from_seed(derive_seed(seed, rep as u64));
            let mut u: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            u.sort_unstable_by(f64::total_cmp);
            (n as f64 / m as f64) * (u[r + m - 1] - u[r - 1])
        })
        .collect();
    Ok(summarise(&values, n, m, r, th_mean, th_var, 0.0))
}

/// Simulate `S = (n/m) (X_(r+m) - X_(r))` at the `q`-quantile of a 1-D
/// distribution and compare with the density-scale targets `1/f(x0)` and
/// `1/(m f(x0)^2)`.
///
/// The spacing index is `r = round(q*n)` clamped into `[1, n-m]`. The targets
/// are asymptotic, so agreement additionally accepts a 5% relative deviation.
pub fn verify_density_spacing(
    dist: &Distribution,
    q: f64,
    n: usize,
    m: usize,
    replications: usize,
    seed: u64,
) -> Result<MomentReport> {
    if dist.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: dist.dim() });
    }
    let r = ((q * n as f64).round() as usize).clamp(1, n.saturating_sub(m).max(1));
    check_spacing_indices(n, r, m, replications)?;

    let x0 = dist.quantile(q)?;
    let f0 = dist.pdf(&Point::one_d(x0)).expect("1-D kind has a density");
    if f0 <= 0.0 {
        return Err(Error::ZeroDensityQuantile);
    }
    let th_mean = 1.0 / f0;
    let th_var = 1.0 / (m as f64 * f0 * f0);

    let values: Vec<f64> = (0..replications)
        .into_par_iter()
        .map(|rep| {
            let sample = dist
                .sample(n, derive_seed(seed, rep as u64))
                .expect("validated distribution samples");
            let mut xs: Vec<f64> = sample.iter().map(|p| p.x()).collect();
            xs.sort_unstable_by(f64::total_cmp);
            (n as f64 / m as f64) * (xs[r + m - 1] - xs[r - 1])
        })
        .collect();
    Ok(summarise(&values, n, m, r, th_mean, th_var, 0.05))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_stat_means() {
        assert_eq!(expected_uniform_order_stat(3, 2).unwrap(), 0.5);
        for n in [1usize, 5, 40] {
            let top = expected_uniform_order_stat(n, n).unwrap();
            assert!((top - n as f64 / (n + 1) as f64).abs() < 1e-15);
        }
        assert!((expected_uniform_order_stat(100, 37).unwrap() - 37.0 / 101.0).abs() < 1e-15);
        assert!(expected_uniform_order_stat(10, 0).is_err());
        assert!(expected_uniform_order_stat(10, 11).is_err());
    }

    #[test]
    fn order_stat_products() {
        // Second moment of a single uniform.
        assert!((expected_uniform_product(1, 1, 1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((expected_uniform_product(10, 3, 7).unwrap() - 24.0 / 132.0).abs() < 1e-15);
        assert!(expected_uniform_product(10, 7, 3).is_err());
        assert!(expected_uniform_product(10, 1, 11).is_err());
    }

    #[test]
    fn product_monte_carlo_agreement() {
        // Direct simulation of E[U_(3) U_(7)] for n = 10.
        let reps = 1_000_000usize;
        let mut rng = rng_from_seed(99);
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        let mut u = [0.0f64; 10];
        for _ in 0..reps {
            for v in u.iter_mut() {
                *v = rng.gen();
            }
            u.sort_unstable_by(f64::total_cmp);
            let prod = u[2] * u[6];
            sum += prod;
            sumsq += prod * prod;
        }
        let mean = sum / reps as f64;
        let var = sumsq / reps as f64 - mean * mean;
        let se = (var / reps as f64).sqrt();
        let th = expected_uniform_product(10, 3, 7).unwrap();
        assert!((mean - th).abs() < 4.0 * se, "mean {mean} vs {th}");
    }

    #[test]
    fn spacing_moment_values() {
        let (mean, var) = spacing_moments_uniform(10, 2).unwrap();
        assert!((mean - 10.0 / 11.0).abs() < 1e-15);
        assert!((var - 100.0 * 9.0 / (2.0 * 121.0 * 12.0)).abs() < 1e-12);

        // Mean is n/(n+1) whatever m is.
        for m in [1usize, 3, 9] {
            let (mean, _) = spacing_moments_uniform(10, m).unwrap();
            assert!((mean - 10.0 / 11.0).abs() < 1e-15);
        }

        // Limits: mean -> 1, variance -> 1/m.
        let (mean, var) = spacing_moments_uniform(1_000_000, 2).unwrap();
        assert!((mean - 1.0).abs() < 2e-6);
        assert!((var - 0.5).abs() < 1e-5);

        assert!(spacing_moments_uniform(10, 10).is_err());
        assert!(spacing_moments_uniform(10, 0).is_err());
    }

    #[test]
    fn variance_formula_consistent_with_product_moments() {
        // Var[T] recomputed from E[U_(i)^2], E[U_(i)U_(j)] and E[U_(i)].
        for n in 3..=50usize {
            for m in 1..n {
                for r in [1usize, n / 2, n - m].into_iter().filter(|&r| r >= 1 && r + m <= n) {
                    let scale = n as f64 / m as f64;
                    let e_hi2 = expected_uniform_product(n, r + m, r + m).unwrap();
                    let e_lo2 = expected_uniform_product(n, r, r).unwrap();
                    let e_cross = expected_uniform_product(n, r, r + m).unwrap();
                    let e_gap = expected_uniform_order_stat(n, r + m).unwrap()
                        - expected_uniform_order_stat(n, r).unwrap();
                    let second = scale * scale * (e_hi2 + e_lo2 - 2.0 * e_cross);
                    let var = second - (scale * e_gap).powi(2);
                    let (_, th_var) = spacing_moments_uniform(n, m).unwrap();
                    assert!(
                        (var - th_var).abs() < 1e-12,
                        "n={n} m={m} r={r}: {var} vs {th_var}"
                    );
                }
            }
        }
    }

    #[test]
    fn variance_strictly_decreases_in_gap() {
        for n in [10usize, 37, 100] {
            let mut prev = f64::INFINITY;
            for m in 1..n {
                let (_, var) = spacing_moments_uniform(n, m).unwrap();
                assert!(var < prev, "n={n} m={m}");
                prev = var;
            }
        }
    }

    #[test]
    fn uniform_spacing_simulation_matches_theory() {
        let report = verify_uniform_spacing(100, 50, 2, 20_000, 11).unwrap();
        assert!(report.agrees(), "{report:?}");
        assert!((report.theoretical_mean - 100.0 / 101.0).abs() < 1e-15);

        // Smallest admissible case: T = 2 (U_(2) - U_(1)), mean 2/3.
        let tiny = verify_uniform_spacing(2, 1, 1, 20_000, 12).unwrap();
        assert!((tiny.empirical_mean - 2.0 / 3.0).abs() < 5.0 * tiny.mean_se);
    }

    #[test]
    fn spacing_moments_do_not_depend_on_r() {
        let reports: Vec<MomentReport> = [10usize, 25, 50, 75, 90]
            .iter()
            .map(|&r| verify_uniform_spacing(100, r, 2, 20_000, 13).unwrap())
            .collect();
        for w in reports.windows(2) {
            let se = (w[0].mean_se.powi(2) + w[1].mean_se.powi(2)).sqrt();
            assert!(
                (w[0].empirical_mean - w[1].empirical_mean).abs() <= 4.0 * se,
                "r={} vs r={}",
                w[0].r,
                w[1].r
            );
            assert_eq!(w[0].theoretical_mean, w[1].theoretical_mean);
            assert_eq!(w[0].theoretical_var, w[1].theoretical_var);
        }
    }

    #[test]
    fn density_spacing_on_uniform_reduces_to_uniform_case() {
        let d = Distribution::uniform_union(vec![(0.0, 1.0)]).unwrap();
        let report = verify_density_spacing(&d, 0.5, 1000, 2, 5_000, 14).unwrap();
        assert!((report.theoretical_mean - 1.0).abs() < 1e-12);
        assert!((report.theoretical_var - 0.5).abs() < 1e-12);
        assert!(report.agrees(), "{report:?}");
    }

    #[test]
    fn density_spacing_normal_median() {
        let d = Distribution::normal(0.0, 1.0).unwrap();
        let report = verify_density_spacing(&d, 0.5, 2000, 2, 3_000, 15).unwrap();
        let sqrt_tau = (2.0 * std::f64::consts::PI).sqrt();
        assert!((report.theoretical_mean - sqrt_tau).abs() < 1e-12);
        assert!(
            (report.empirical_mean - sqrt_tau).abs() < 0.05 * sqrt_tau,
            "mean {}",
            report.empirical_mean
        );
    }

    #[test]
    fn verification_preconditions() {
        assert!(verify_uniform_spacing(100, 50, 2, 999, 0).is_err());
        assert!(verify_uniform_spacing(100, 99, 2, 2000, 0).is_err());
        assert!(verify_uniform_spacing(100, 0, 2, 2000, 0).is_err());
        let d2 = Distribution::annulus_union_uniform(vec![(1.0, 2.0)]).unwrap();
        assert!(verify_density_spacing(&d2, 0.5, 100, 2, 2000, 0).is_err());
    }

    #[test]
    fn csv_row_shape() {
        let report = verify_uniform_spacing(50, 10, 2, 2000, 16).unwrap();
        let row = report.csv_row();
        assert_eq!(row.split(',').count(), MomentReport::CSV_HEADER.split(',').count());
        assert!(row.starts_with("50,2,10,2000,"));
    }
}
