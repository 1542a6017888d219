//! Data-generating distributions for the simulation cases.
//!
//! Each kind offers seeded sampling; the 1-D kinds and the bivariate normal
//! also expose an exact density, and the 1-D kinds a CDF and quantile
//! (bisection on the CDF). The two circular kinds are sampling-only — their
//! densities live on a curve or an annulus union and are not needed for
//! plotting overlays.

use rand::Rng;
use rand_distr::{Distribution as _, Pareto as ParetoSampler, StandardNormal};
use statrs::distribution::ContinuousCDF;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::linalg::SymMatrix;
use crate::rng::rng_from_seed;

const SQRT_TAU: f64 = 2.5066282746310002; // sqrt(2*pi)

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / SQRT_TAU
}

fn std_normal_cdf(z: f64) -> f64 {
    statrs::distribution::Normal::new(0.0, 1.0).unwrap().cdf(z)
}

/// A data-generating distribution on the line, the plane, or the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    Normal { mean: f64, sd: f64 },
    /// Uniform over a union of pairwise disjoint intervals.
    UniformUnion { intervals: Vec<(f64, f64)> },
    /// Components are `(weight, mean, sd)`.
    NormalMixture { components: Vec<(f64, f64, f64)> },
    Pareto { x_m: f64, alpha: f64 },
    BivariateNormal { mean: Point, cov: SymMatrix },
    /// Uniform by area over a union of disjoint origin-centred annulus bands.
    AnnulusUnionUniform { bands: Vec<(f64, f64)> },
    /// A zero-mean bivariate normal draw, normalised onto the unit circle.
    ProjectedNormalCircle { cov: SymMatrix },
}

impl Distribution {
    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        if !(sd.is_finite() && sd > 0.0 && mean.is_finite()) {
            return Err(Error::InvalidDistribution(format!("normal needs sd > 0, got {sd}")));
        }
        Ok(Distribution::Normal { mean, sd })
    }

    pub fn uniform_union(intervals: Vec<(f64, f64)>) -> Result<Self> {
        validate_disjoint(&intervals, "interval")?;
        Ok(Distribution::UniformUnion { intervals })
    }

    pub fn normal_mixture(components: Vec<(f64, f64, f64)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidDistribution("mixture needs components".into()));
        }
        let total: f64 = components.iter().map(|c| c.0).sum();
        if components.iter().any(|&(w, m, s)| w <= 0.0 || !m.is_finite() || s <= 0.0)
            || (total - 1.0).abs() > 1e-12
        {
            return Err(Error::InvalidDistribution(
                "mixture weights must be positive and sum to 1".into(),
            ));
        }
        Ok(Distribution::NormalMixture { components })
    }

    pub fn pareto(x_m: f64, alpha: f64) -> Result<Self> {
        if !(x_m > 0.0 && alpha > 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "pareto needs x_m > 0 and alpha > 0, got ({x_m}, {alpha})"
            )));
        }
        Ok(Distribution::Pareto { x_m, alpha })
    }

    pub fn bivariate_normal(mean: Point, cov: [[f64; 2]; 2]) -> Result<Self> {
        if mean.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: mean.dim() });
        }
        let cov = SymMatrix::from_2x2(cov)?;
        if !cov.is_positive_definite() {
            return Err(Error::InvalidDistribution("covariance must be positive definite".into()));
        }
        Ok(Distribution::BivariateNormal { mean, cov })
    }

    pub fn annulus_union_uniform(bands: Vec<(f64, f64)>) -> Result<Self> {
        validate_disjoint(&bands, "band")?;
        if bands.iter().any(|&(lo, _)| lo < 0.0) {
            return Err(Error::InvalidDistribution("band radii must be non-negative".into()));
        }
        Ok(Distribution::AnnulusUnionUniform { bands })
    }

    pub fn projected_normal_circle(cov: [[f64; 2]; 2]) -> Result<Self> {
        let cov = SymMatrix::from_2x2(cov)?;
        if !cov.is_positive_definite() {
            return Err(Error::InvalidDistribution("covariance must be positive definite".into()));
        }
        Ok(Distribution::ProjectedNormalCircle { cov })
    }

    pub fn dim(&self) -> usize {
        match self {
            Distribution::Normal { .. }
            | Distribution::UniformUnion { .. }
            | Distribution::NormalMixture { .. }
            | Distribution::Pareto { .. } => 1,
            _ => 2,
        }
    }

    /// Draw `count` i.i.d. points, deterministically for a fixed seed.
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<Point>> {
        if count == 0 {
            return Err(Error::InvalidParameter("sample count must be >= 1".into()));
        }
        let mut rng = rng_from_seed(seed);
        let mut out = Vec::with_capacity(count);
        match self {
            Distribution::Normal { mean, sd } => {
                for _ in 0..count {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    out.push(Point::one_d(mean + sd * z));
                }
            }
            Distribution::UniformUnion { intervals } => {
                let total: f64 = intervals.iter().map(|(a, b)| b - a).sum();
                for _ in 0..count {
                    // Position within the total length picks the interval with
                    // probability proportional to its length.
                    let mut u = rng.gen::<f64>() * total;
                    let mut x = intervals.last().map(|&(_, b)| b).unwrap();
                    for &(a, b) in intervals {
                        if u <= b - a {
                            x = a + u;
                            break;
                        }
                        u -= b - a;
                    }
                    out.push(Point::one_d(x));
                }
            }
            Distribution::NormalMixture { components } => {
                for _ in 0..count {
                    let mut u = rng.gen::<f64>();
                    let mut pick = components.len() - 1;
                    for (i, &(w, _, _)) in components.iter().enumerate() {
                        if u <= w {
                            pick = i;
                            break;
                        }
                        u -= w;
                    }
                    let (_, m, s) = components[pick];
                    let z: f64 = StandardNormal.sample(&mut rng);
                    out.push(Point::one_d(m + s * z));
                }
            }
            Distribution::Pareto { x_m, alpha } => {
                let sampler = ParetoSampler::new(*x_m, *alpha)
                    .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
                for _ in 0..count {
                    out.push(Point::one_d(sampler.sample(&mut rng)));
                }
            }
            Distribution::BivariateNormal { mean, cov } => {
                let l = cov.cholesky()?;
                for _ in 0..count {
                    let z0: f64 = StandardNormal.sample(&mut rng);
                    let z1: f64 = StandardNormal.sample(&mut rng);
                    out.push(Point::two_d(
                        mean.x() + l[0][0] * z0,
                        mean.y() + l[1][0] * z0 + l[1][1] * z1,
                    ));
                }
            }
            Distribution::AnnulusUnionUniform { bands } => {
                let areas: Vec<f64> = bands.iter().map(|&(a, b)| b * b - a * a).collect();
                let total: f64 = areas.iter().sum();
                for _ in 0..count {
                    let mut u = rng.gen::<f64>() * total;
                    let mut pick = bands.len() - 1;
                    for (i, &a) in areas.iter().enumerate() {
                        if u <= a {
                            pick = i;
                            break;
                        }
                        u -= a;
                    }
                    let (lo, hi) = bands[pick];
                    let r = (lo * lo + rng.gen::<f64>() * (hi * hi - lo * lo)).sqrt();
                    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                    out.push(Point::two_d(r * theta.cos(), r * theta.sin()));
                }
            }
            Distribution::ProjectedNormalCircle { cov } => {
                let l = cov.cholesky()?;
                for _ in 0..count {
                    loop {
                        let z0: f64 = StandardNormal.sample(&mut rng);
                        let z1: f64 = StandardNormal.sample(&mut rng);
                        let x = l[0][0] * z0;
                        let y = l[1][0] * z0 + l[1][1] * z1;
                        let norm = (x * x + y * y).sqrt();
                        if norm > 1e-150 {
                            out.push(Point::two_d(x / norm, y / norm));
                            break;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Exact density at `x`, or `None` for the two circular kinds.
    pub fn pdf(&self, x: &Point) -> Option<f64> {
        match self {
            Distribution::Normal { mean, sd } => {
                Some(std_normal_pdf((x.x() - mean) / sd) / sd)
            }
            Distribution::UniformUnion { intervals } => {
                let total: f64 = intervals.iter().map(|(a, b)| b - a).sum();
                let inside = intervals.iter().any(|&(a, b)| a <= x.x() && x.x() <= b);
                Some(if inside { 1.0 / total } else { 0.0 })
            }
            Distribution::NormalMixture { components } => Some(
                components
                    .iter()
                    .map(|&(w, m, s)| w * std_normal_pdf((x.x() - m) / s) / s)
                    .sum(),
            ),
            Distribution::Pareto { x_m, alpha } => {
                let v = x.x();
                Some(if v >= *x_m { alpha * x_m.powf(*alpha) / v.powf(alpha + 1.0) } else { 0.0 })
            }
            Distribution::BivariateNormal { mean, cov } => {
                let inv = cov.inverse().ok()?;
                let d = [x.x() - mean.x(), x.y() - mean.y()];
                let q = inv.quad_form(&d);
                Some((-0.5 * q).exp() / (std::f64::consts::TAU * cov.det().sqrt()))
            }
            Distribution::AnnulusUnionUniform { .. }
            | Distribution::ProjectedNormalCircle { .. } => None,
        }
    }

    /// CDF for the 1-D kinds; `None` in two dimensions.
    pub fn cdf(&self, x: f64) -> Option<f64> {
        match self {
            Distribution::Normal { mean, sd } => Some(std_normal_cdf((x - mean) / sd)),
            Distribution::UniformUnion { intervals } => {
                let total: f64 = intervals.iter().map(|(a, b)| b - a).sum();
                let covered: f64 =
                    intervals.iter().map(|&(a, b)| (x.min(b) - a).max(0.0)).sum();
                Some(covered / total)
            }
            Distribution::NormalMixture { components } => Some(
                components.iter().map(|&(w, m, s)| w * std_normal_cdf((x - m) / s)).sum(),
            ),
            Distribution::Pareto { x_m, alpha } => {
                Some(if x >= *x_m { 1.0 - (x_m / x).powf(*alpha) } else { 0.0 })
            }
            _ => None,
        }
    }

    /// `q`-quantile of a 1-D kind, by bisection on the CDF.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if self.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: 2 });
        }
        if !(0.0 < q && q < 1.0) {
            return Err(Error::InvalidParameter(format!("quantile level must be in (0,1), got {q}")));
        }
        let (mut lo, mut hi) = self.quantile_bracket();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid).expect("1-D kind has a CDF") < q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    fn quantile_bracket(&self) -> (f64, f64) {
        match self {
            Distribution::Normal { mean, sd } => (mean - 40.0 * sd, mean + 40.0 * sd),
            Distribution::UniformUnion { intervals } => {
                let lo = intervals.iter().map(|i| i.0).fold(f64::INFINITY, f64::min);
                let hi = intervals.iter().map(|i| i.1).fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            }
            Distribution::NormalMixture { components } => {
                let lo = components.iter().map(|c| c.1 - 40.0 * c.2).fold(f64::INFINITY, f64::min);
                let hi =
                    components.iter().map(|c| c.1 + 40.0 * c.2).fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            }
            Distribution::Pareto { x_m, alpha } => {
                // Upper end beyond the 1 - 2^-60 quantile.
                (*x_m, x_m * (2f64.powi(60)).powf(1.0 / alpha))
            }
            _ => unreachable!("quantile_bracket is 1-D only"),
        }
    }
}

fn validate_disjoint(ranges: &[(f64, f64)], what: &str) -> Result<()> {
    if ranges.is_empty() {
        return Err(Error::InvalidDistribution(format!("{what} list is empty")));
    }
    if ranges.iter().any(|&(a, b)| !(a.is_finite() && b.is_finite() && a < b)) {
        return Err(Error::InvalidDistribution(format!("each {what} needs lo < hi")));
    }
    let mut sorted = ranges.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in sorted.windows(2) {
        if w[0].1 > w[1].0 {
            return Err(Error::InvalidDistribution(format!("{what}s overlap")));
        }
    }
    Ok(())
}
