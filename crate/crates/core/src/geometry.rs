//! Sample spaces: points in one or two dimensions, the support windows the
//! reference uniforms are drawn over, and the metrics used for
//! nearest-neighbour queries.
//!
//! A [`SupportWindow`] is the region a dominating uniform sample lives on:
//! an interval on the line, an axis-aligned rectangle, an annulus (a disc is
//! an annulus with zero inner radius), or a circle (the curve itself, for
//! data constrained to it). `measure()` is length, area, or arc length
//! respectively and is the normalisation constant of the corrected cell-area
//! estimate.

use rand::Rng;
use rand_distr::{Distribution as _, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// A point in R^1 or R^2. One-dimensional points store a zero second
/// coordinate so squared-distance code is shared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    coords: [f64; 2],
    dim: usize,
}

impl Point {
    pub fn one_d(x: f64) -> Self {
        Point { coords: [x, 0.0], dim: 1 }
    }

    pub fn two_d(x: f64, y: f64) -> Self {
        Point { coords: [x, y], dim: 2 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    /// Second coordinate; zero for 1-D points.
    pub fn y(&self) -> f64 {
        self.coords[1]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.coords[..self.dim].iter().all(|c| c.is_finite())
    }

    pub fn norm(&self) -> f64 {
        self.coords[..self.dim].iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Squared Euclidean distance in the ambient space. All nearest-neighbour
    /// comparisons in the crate run on this quantity so that ties are decided
    /// identically everywhere.
    #[inline]
    pub fn dist2(&self, other: &Point) -> f64 {
        let dx = self.coords[0] - other.coords[0];
        let dy = self.coords[1] - other.coords[1];
        dx * dx + dy * dy
    }
}

/// Distance kind for nearest-neighbour queries.
///
/// `Arc` applies to points constrained to a common origin-centred circle.
/// Arc length is strictly monotone in chord length, so nearest-point
/// searches use ambient squared Euclidean distance for both kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    Arc,
}

impl Metric {
    /// Distance between two points of equal dimension.
    pub fn distance(&self, a: &Point, b: &Point) -> Result<f64> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
        }
        match self {
            Metric::Euclidean => Ok(a.dist2(b).sqrt()),
            Metric::Arc => {
                if a.dim() != 2 {
                    return Err(Error::InvalidParameter(
                        "arc metric requires 2-D points on a circle".into(),
                    ));
                }
                let ra = a.norm();
                let rb = b.norm();
                if ra <= 0.0 || ((ra - rb).abs() > 1e-9 * ra.max(1.0)) {
                    return Err(Error::InvalidParameter(
                        "arc metric requires both points on the same origin-centred circle".into(),
                    ));
                }
                // Geometric-mean radius keeps the distance exactly symmetric
                // under rounding of the two near-identical norms.
                let radius = (ra * rb).sqrt();
                let cos = ((a.x() * b.x() + a.y() * b.y()) / (ra * rb)).clamp(-1.0, 1.0);
                Ok(radius * cos.acos())
            }
        }
    }
}

/// Region the dominating uniform reference sample is drawn over.
#[derive(Debug, Clone, PartialEq)]
pub enum SupportWindow {
    /// `(lo, hi)` on the real line.
    Interval { lo: f64, hi: f64 },
    /// Axis-aligned rectangle, `low < high` componentwise.
    Rectangle { low: Point, high: Point },
    /// Origin-centred annulus, `0 <= inner < outer`. A disc has `inner = 0`.
    Annulus { inner: f64, outer: f64 },
    /// The origin-centred circle (curve) of the given radius.
    Circle { radius: f64 },
}

impl SupportWindow {
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidWindow(format!("interval needs lo < hi, got ({lo}, {hi})")));
        }
        Ok(SupportWindow::Interval { lo, hi })
    }

    pub fn rectangle(low: Point, high: Point) -> Result<Self> {
        if low.dim() != 2 || high.dim() != 2 {
            return Err(Error::InvalidWindow("rectangle corners must be 2-D".into()));
        }
        if !(low.is_finite() && high.is_finite() && low.x() < high.x() && low.y() < high.y()) {
            return Err(Error::InvalidWindow("rectangle needs low < high componentwise".into()));
        }
        Ok(SupportWindow::Rectangle { low, high })
    }

    pub fn annulus(inner: f64, outer: f64) -> Result<Self> {
        if !(inner.is_finite() && outer.is_finite() && 0.0 <= inner && inner < outer) {
            return Err(Error::InvalidWindow(format!(
                "annulus needs 0 <= inner < outer, got ({inner}, {outer})"
            )));
        }
        Ok(SupportWindow::Annulus { inner, outer })
    }

    pub fn circle(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidWindow(format!("circle needs radius > 0, got {radius}")));
        }
        Ok(SupportWindow::Circle { radius })
    }

    /// Symmetric interval `(-K, K)` with `K = max(|max sample|, |min sample|)`,
    /// covering a 1-D sample.
    pub fn symmetric_covering(samples: &[Point]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        if samples.iter().any(|p| p.dim() != 1) {
            return Err(Error::DimensionMismatch { expected: 1, got: 2 });
        }
        let k = samples.iter().map(|p| p.x().abs()).fold(f64::NEG_INFINITY, f64::max);
        Self::interval(-k, k)
    }

    /// Dimension of the points the window holds.
    pub fn dim(&self) -> usize {
        match self {
            SupportWindow::Interval { .. } => 1,
            _ => 2,
        }
    }

    /// Length, area, or arc length of the window.
    pub fn measure(&self) -> f64 {
        match self {
            SupportWindow::Interval { lo, hi } => hi - lo,
            SupportWindow::Rectangle { low, high } => (high.x() - low.x()) * (high.y() - low.y()),
            SupportWindow::Annulus { inner, outer } => {
                std::f64::consts::PI * (outer * outer - inner * inner)
            }
            SupportWindow::Circle { radius } => 2.0 * std::f64::consts::PI * radius,
        }
    }

    /// Closed-region membership test. Circle membership allows a small
    /// tolerance on the radius since circle points come from normalisation.
    pub fn contains(&self, p: &Point) -> bool {
        if p.dim() != self.dim() {
            return false;
        }
        match self {
            SupportWindow::Interval { lo, hi } => *lo <= p.x() && p.x() <= *hi,
            SupportWindow::Rectangle { low, high } => {
                low.x() <= p.x() && p.x() <= high.x() && low.y() <= p.y() && p.y() <= high.y()
            }
            SupportWindow::Annulus { inner, outer } => {
                let r = p.norm();
                *inner <= r && r <= *outer
            }
            SupportWindow::Circle { radius } => (p.norm() - radius).abs() <= 1e-9 * radius.max(1.0),
        }
    }

    /// Draw `count` points uniformly over the window.
    ///
    /// Interval and rectangle draws are coordinatewise uniform. Annulus draws
    /// use the inverse CDF in the radius so density is uniform over the area.
    /// Circle draws normalise standard bivariate normal deviates, which is
    /// uniform in arc length by rotational symmetry.
    pub fn sample_uniform(&self, count: usize, seed: u64) -> Result<Vec<Point>> {
        if count == 0 {
            return Err(Error::InvalidParameter("sample count must be >= 1".into()));
        }
        let mut rng = rng_from_seed(seed);
        let mut out = Vec::with_capacity(count);
        match self {
            SupportWindow::Interval { lo, hi } => {
                for _ in 0..count {
                    out.push(Point::one_d(rng.gen_range(*lo..*hi)));
                }
            }
            SupportWindow::Rectangle { low, high } => {
                for _ in 0..count {
                    let x = rng.gen_range(low.x()..high.x());
                    let y = rng.gen_range(low.y()..high.y());
                    out.push(Point::two_d(x, y));
                }
            }
            SupportWindow::Annulus { inner, outer } => {
                let i2 = inner * inner;
                let o2 = outer * outer;
                for _ in 0..count {
                    let r = (i2 + rng.gen::<f64>() * (o2 - i2)).sqrt();
                    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
                    out.push(Point::two_d(r * theta.cos(), r * theta.sin()));
                }
            }
            SupportWindow::Circle { radius } => {
                for _ in 0..count {
                    out.push(random_circle_point(&mut rng, *radius));
                }
            }
        }
        Ok(out)
    }
}

/// Uniform point on the origin-centred circle of the given radius.
pub(crate) fn random_circle_point<R: Rng>(rng: &mut R, radius: f64) -> Point {
    loop {
        let x: f64 = StandardNormal.sample(rng);
        let y: f64 = StandardNormal.sample(rng);
        let norm = (x * x + y * y).sqrt();
        if norm > 1e-150 {
            return Point::two_d(radius * x / norm, radius * y / norm);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_window_from_samples() {
        let pts: Vec<Point> = [-2.0, 1.0, 3.0].iter().map(|&x| Point::one_d(x)).collect();
        let w = SupportWindow::symmetric_covering(&pts).unwrap();
        assert_eq!(w, SupportWindow::Interval { lo: -3.0, hi: 3.0 });

        let single = [Point::one_d(0.5)];
        let w = SupportWindow::symmetric_covering(&single).unwrap();
        assert_eq!(w, SupportWindow::Interval { lo: -0.5, hi: 0.5 });

        // K comes from the largest magnitude, not the largest value.
        let pts: Vec<Point> = [-7.0, -1.0].iter().map(|&x| Point::one_d(x)).collect();
        let w = SupportWindow::symmetric_covering(&pts).unwrap();
        assert_eq!(w, SupportWindow::Interval { lo: -7.0, hi: 7.0 });

        assert!(matches!(SupportWindow::symmetric_covering(&[]), Err(Error::EmptyTrainingSet)));
    }

    #[test]
    fn measures() {
        let w = SupportWindow::interval(-2.0, 9.0).unwrap();
        assert!((w.measure() - 11.0).abs() < 1e-12);

        let a = SupportWindow::annulus(4.0, 11.0).unwrap();
        assert!((a.measure() - std::f64::consts::PI * 105.0).abs() < 1e-9);

        let c = SupportWindow::circle(1.0).unwrap();
        assert!((c.measure() - std::f64::consts::TAU).abs() < 1e-12);

        let r = SupportWindow::rectangle(Point::two_d(0.0, 0.0), Point::two_d(2.0, 3.0)).unwrap();
        assert!((r.measure() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_windows_rejected() {
        assert!(SupportWindow::interval(3.0, 3.0).is_err());
        assert!(SupportWindow::annulus(5.0, 4.0).is_err());
        assert!(SupportWindow::annulus(-1.0, 4.0).is_err());
        assert!(SupportWindow::circle(0.0).is_err());
    }

    #[test]
    fn interval_sampling_is_deterministic_and_in_window() {
        let w = SupportWindow::interval(0.0, 1.0).unwrap();
        let a = w.sample_uniform(5, 99).unwrap();
        let b = w.sample_uniform(5, 99).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|p| w.contains(p)));
        assert!(w.sample_uniform(0, 1).is_err());
    }

    #[test]
    fn circle_samples_have_unit_norm() {
        let w = SupportWindow::circle(1.0).unwrap();
        for p in w.sample_uniform(1000, 7).unwrap() {
            assert!((p.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn annulus_radius_fraction_matches_area_ratio() {
        // Fraction with norm < 8 inside annulus(4, 11) is (64-16)/(121-16).
        let w = SupportWindow::annulus(4.0, 11.0).unwrap();
        let pts = w.sample_uniform(100_000, 5).unwrap();
        let frac = pts.iter().filter(|p| p.norm() < 8.0).count() as f64 / pts.len() as f64;
        assert!((frac - 48.0 / 105.0).abs() < 0.01, "frac = {frac}");
        assert!(pts.iter().all(|p| w.contains(p)));
    }

    #[test]
    fn distances() {
        let m = Metric::Euclidean;
        assert_eq!(m.distance(&Point::one_d(0.0), &Point::one_d(3.0)).unwrap(), 3.0);
        assert_eq!(m.distance(&Point::two_d(0.0, 0.0), &Point::two_d(3.0, 4.0)).unwrap(), 5.0);

        let arc = Metric::Arc;
        let d = arc.distance(&Point::two_d(1.0, 0.0), &Point::two_d(0.0, 1.0)).unwrap();
        assert!((d - std::f64::consts::FRAC_PI_2).abs() < 1e-12);

        assert!(m.distance(&Point::one_d(0.0), &Point::two_d(0.0, 0.0)).is_err());
        assert!(arc.distance(&Point::two_d(1.0, 0.0), &Point::two_d(2.0, 0.0)).is_err());
    }

    #[test]
    fn uniform_mean_converges() {
        let w = SupportWindow::interval(-2.0, 9.0).unwrap();
        let n = 100_000;
        let pts = w.sample_uniform(n, 11).unwrap();
        let mean = pts.iter().map(|p| p.x()).sum::<f64>() / n as f64;
        // sd of U(l1,l2) is (l2-l1)/sqrt(12); allow 4 standard errors.
        let se = 11.0 / 12f64.sqrt() / (n as f64).sqrt();
        assert!((mean - 3.5).abs() < 4.0 * se, "mean = {mean}");
    }

    #[test]
    fn metric_axioms_on_random_triples() {
        use rand::Rng;
        let mut rng = crate::rng::rng_from_seed(13);
        for _ in 0..1000 {
            let a = Point::two_d(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let b = Point::two_d(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let c = Point::two_d(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let m = Metric::Euclidean;
            let ab = m.distance(&a, &b).unwrap();
            let ba = m.distance(&b, &a).unwrap();
            let ac = m.distance(&a, &c).unwrap();
            let cb = m.distance(&c, &b).unwrap();
            assert!(ab >= 0.0);
            assert_eq!(ab, ba);
            assert_eq!(m.distance(&a, &a).unwrap(), 0.0);
            assert!(ab <= ac + cb + 1e-12);
        }
        // Arc metric triples on the unit circle.
        for _ in 0..1000 {
            let a = random_circle_point(&mut rng, 1.0);
            let b = random_circle_point(&mut rng, 1.0);
            let c = random_circle_point(&mut rng, 1.0);
            let m = Metric::Arc;
            let ab = m.distance(&a, &b).unwrap();
            let ac = m.distance(&a, &c).unwrap();
            let cb = m.distance(&c, &b).unwrap();
            assert!(ab >= 0.0);
            assert_eq!(ab, m.distance(&b, &a).unwrap());
            assert!(ab <= ac + cb + 1e-12);
        }
    }
}
