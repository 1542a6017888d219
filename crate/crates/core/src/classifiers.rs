//! Two-class Bayes classification and the comparison methods: linear and
//! quadratic discriminant analysis and kernel density Bayes classifiers.
//!
//! Every classifier reduces to the same rule: assign class 1 exactly when
//! `prior1 * density1(x) >= prior2 * density2(x)` (ties and the two-zero
//! case go to class 1). The Voronoi density models plug into the same rule;
//! their empty-cell sentinel enters the comparison as plus infinity — a cell
//! that captured no reference mass has a vanishing area estimate, so the
//! formula's limit is an unbounded density.

use crate::density::{TrainingSet, VoronoiDensityModel};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::linalg::SymMatrix;

const SQRT_TAU: f64 = 2.5066282746310002;

/// A class assignment from the two-class rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Class1,
    Class2,
}

impl Label {
    pub fn as_index(&self) -> usize {
        match self {
            Label::Class1 => 1,
            Label::Class2 => 2,
        }
    }
}

/// The shared decision rule on prior-weighted densities.
///
/// Scale-equivariant: multiplying both densities by one positive constant
/// never changes the label.
pub fn bayes_label(prior1: f64, density1: f64, prior2: f64, density2: f64) -> Label {
    debug_assert!(prior1 > 0.0 && prior2 > 0.0);
    if prior1 * density1 >= prior2 * density2 {
        Label::Class1
    } else {
        Label::Class2
    }
}

/// Sample mean and unbiased covariance of one class.
struct ClassStats {
    n: usize,
    dim: usize,
    mean: [f64; 2],
    cov: SymMatrix,
}

fn class_stats(ts: &TrainingSet) -> ClassStats {
    let n = ts.len();
    let dim = ts.dim();
    let mut mean = [0.0f64; 2];
    for p in ts.points() {
        mean[0] += p.x();
        mean[1] += p.y();
    }
    mean[0] /= n as f64;
    mean[1] /= n as f64;
    let (mut xx, mut xy, mut yy) = (0.0, 0.0, 0.0);
    for p in ts.points() {
        let dx = p.x() - mean[0];
        let dy = p.y() - mean[1];
        xx += dx * dx;
        xy += dx * dy;
        yy += dy * dy;
    }
    let denom = (n - 1) as f64;
    let cov = if dim == 1 {
        SymMatrix::dim1(xx / denom)
    } else {
        SymMatrix::dim2(xx / denom, xy / denom, yy / denom)
    };
    ClassStats { n, dim, mean, cov }
}

fn check_class_sizes(c1: &ClassStats, c2: &ClassStats) -> Result<()> {
    if c1.dim != c2.dim {
        return Err(Error::DimensionMismatch { expected: c1.dim, got: c2.dim });
    }
    for c in [c1, c2] {
        if c.n < c.dim + 1 {
            return Err(Error::TrainingSetTooSmall { min: c.dim + 1, got: c.n });
        }
    }
    Ok(())
}

fn priors(n1: usize, n2: usize) -> (f64, f64) {
    let total = (n1 + n2) as f64;
    (n1 as f64 / total, n2 as f64 / total)
}

/// Linear discriminant: Gaussian classes with a pooled covariance matrix.
#[derive(Debug, Clone)]
pub struct LdaModel {
    dim: usize,
    means: [[f64; 2]; 2],
    pooled_inv: SymMatrix,
    log_priors: [f64; 2],
}

impl LdaModel {
    fn score(&self, x: &Point, class: usize) -> f64 {
        let m = self.means[class];
        let xv = [x.x(), x.y()];
        // x' S^-1 m - m' S^-1 m / 2 + log prior
        let sm = [
            self.pooled_inv.get(0, 0) * m[0] + self.pooled_inv.get(0, 1) * m[1],
            self.pooled_inv.get(1, 0) * m[0] + self.pooled_inv.get(1, 1) * m[1],
        ];
        let lin = match self.dim {
            1 => xv[0] * sm[0],
            _ => xv[0] * sm[0] + xv[1] * sm[1],
        };
        let quad = match self.dim {
            1 => m[0] * sm[0],
            _ => m[0] * sm[0] + m[1] * sm[1],
        };
        lin - 0.5 * quad + self.log_priors[class]
    }
}

/// Quadratic discriminant: Gaussian classes with per-class covariances.
#[derive(Debug, Clone)]
pub struct QdaModel {
    dim: usize,
    means: [[f64; 2]; 2],
    inverses: [SymMatrix; 2],
    log_dets: [f64; 2],
    log_priors: [f64; 2],
}

impl QdaModel {
    fn score(&self, x: &Point, class: usize) -> f64 {
        let m = self.means[class];
        let d = [x.x() - m[0], x.y() - m[1]];
        let q = self.inverses[class].quad_form(&d[..self.dim]);
        -0.5 * self.log_dets[class] - 0.5 * q + self.log_priors[class]
    }
}

/// Which kernel a KDE Bayes classifier smooths with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KdeKernel {
    Gaussian,
    Epanechnikov,
}

impl KdeKernel {
    fn evaluate(&self, u: f64) -> f64 {
        match self {
            KdeKernel::Gaussian => (-0.5 * u * u).exp() / SQRT_TAU,
            KdeKernel::Epanechnikov => {
                if u.abs() <= 1.0 {
                    0.75 * (1.0 - u * u)
                } else {
                    0.0
                }
            }
        }
    }
}

/// One-dimensional kernel density estimate for one class.
#[derive(Debug, Clone)]
pub struct KdeModel {
    xs: Vec<f64>,
    bandwidth: f64,
    kernel: KdeKernel,
}

impl KdeModel {
    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn density(&self, x: f64) -> f64 {
        let h = self.bandwidth;
        let sum: f64 = self.xs.iter().map(|&xi| self.kernel.evaluate((x - xi) / h)).sum();
        sum / (self.xs.len() as f64 * h)
    }
}

/// Linearly interpolated sample quantile of sorted data.
fn sorted_quantile(sorted: &[f64], p: f64) -> f64 {
    let idx = p * (sorted.len() - 1) as f64;
    let lo = idx.floor() as usize;
    let hi = idx.ceil() as usize;
    let w = idx - lo as f64;
    sorted[lo] * (1.0 - w) + sorted[hi] * w
}

/// Fit a one-class KDE with the reference bandwidth
/// `h = 0.9 * min(sd, IQR / 1.34) * n^(-1/5)`; if one of the two spread
/// measures degenerates to zero the other is used.
pub fn fit_kde(class: &TrainingSet, kernel: KdeKernel) -> Result<KdeModel> {
    if class.dim() != 1 {
        return Err(Error::MethodInfeasible {
            method: "kernel density estimate".into(),
            reason: "only one-dimensional data is supported".into(),
        });
    }
    let xs: Vec<f64> = class.points().iter().map(|p| p.x()).collect();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let mut sorted = xs.clone();
    sorted.sort_by(f64::total_cmp);
    let iqr = sorted_quantile(&sorted, 0.75) - sorted_quantile(&sorted, 0.25);

    let spread = match (sd > 0.0, iqr > 0.0) {
        (true, true) => sd.min(iqr / 1.34),
        (true, false) => sd,
        (false, true) => iqr / 1.34,
        (false, false) => return Err(Error::ZeroSpread),
    };
    let bandwidth = 0.9 * spread * n.powf(-0.2);
    Ok(KdeModel { xs, bandwidth, kernel })
}

/// A fitted two-class decision object.
#[derive(Debug, Clone)]
pub enum ClassifierModel {
    VoronoiNn { class1: VoronoiDensityModel, class2: VoronoiDensityModel, priors: (f64, f64) },
    Lda(LdaModel),
    Qda(QdaModel),
    Kde { class1: KdeModel, class2: KdeModel, priors: (f64, f64) },
}

impl ClassifierModel {
    /// Pair two fitted Voronoi density models into a Bayes classifier with
    /// priors proportional to the class sizes.
    pub fn voronoi(class1: VoronoiDensityModel, class2: VoronoiDensityModel) -> Self {
        let priors = priors(class1.training().len(), class2.training().len());
        ClassifierModel::VoronoiNn { class1, class2, priors }
    }

    /// Classify a query point; ties go to class 1.
    pub fn classify(&self, x: &Point) -> Label {
        match self {
            ClassifierModel::VoronoiNn { class1, class2, priors } => {
                let f1 = class1.density_at(x).or_infinite();
                let f2 = class2.density_at(x).or_infinite();
                bayes_label(priors.0, f1, priors.1, f2)
            }
            ClassifierModel::Lda(m) => {
                if m.score(x, 0) >= m.score(x, 1) {
                    Label::Class1
                } else {
                    Label::Class2
                }
            }
            ClassifierModel::Qda(m) => {
                if m.score(x, 0) >= m.score(x, 1) {
                    Label::Class1
                } else {
                    Label::Class2
                }
            }
            ClassifierModel::Kde { class1, class2, priors } => {
                bayes_label(priors.0, class1.density(x.x()), priors.1, class2.density(x.x()))
            }
        }
    }
}

/// Fit linear discriminant analysis on two classes.
pub fn fit_lda(class1: &TrainingSet, class2: &TrainingSet) -> Result<ClassifierModel> {
    let s1 = class_stats(class1);
    let s2 = class_stats(class2);
    check_class_sizes(&s1, &s2)?;
    let dim = s1.dim;
    let denom = (s1.n + s2.n - 2) as f64;
    let pooled = if dim == 1 {
        SymMatrix::dim1(
            ((s1.n - 1) as f64 * s1.cov.get(0, 0) + (s2.n - 1) as f64 * s2.cov.get(0, 0)) / denom,
        )
    } else {
        SymMatrix::dim2(
            ((s1.n - 1) as f64 * s1.cov.get(0, 0) + (s2.n - 1) as f64 * s2.cov.get(0, 0)) / denom,
            ((s1.n - 1) as f64 * s1.cov.get(0, 1) + (s2.n - 1) as f64 * s2.cov.get(0, 1)) / denom,
            ((s1.n - 1) as f64 * s1.cov.get(1, 1) + (s2.n - 1) as f64 * s2.cov.get(1, 1)) / denom,
        )
    };
    let pooled_inv = pooled.inverse()?;
    let (p1, p2) = priors(s1.n, s2.n);
    Ok(ClassifierModel::Lda(LdaModel {
        dim,
        means: [s1.mean, s2.mean],
        pooled_inv,
        log_priors: [p1.ln(), p2.ln()],
    }))
}

/// Fit quadratic discriminant analysis on two classes.
pub fn fit_qda(class1: &TrainingSet, class2: &TrainingSet) -> Result<ClassifierModel> {
    let s1 = class_stats(class1);
    let s2 = class_stats(class2);
    check_class_sizes(&s1, &s2)?;
    let inv1 = s1.cov.inverse()?;
    let inv2 = s2.cov.inverse()?;
    let (p1, p2) = priors(s1.n, s2.n);
    Ok(ClassifierModel::Qda(QdaModel {
        dim: s1.dim,
        means: [s1.mean, s2.mean],
        inverses: [inv1, inv2],
        log_dets: [s1.cov.det().ln(), s2.cov.det().ln()],
        log_priors: [p1.ln(), p2.ln()],
    }))
}

/// Fit a KDE Bayes classifier (one-dimensional data only).
pub fn fit_kde_classifier(
    class1: &TrainingSet,
    class2: &TrainingSet,
    kernel: KdeKernel,
) -> Result<ClassifierModel> {
    let m1 = fit_kde(class1, kernel)?;
    let m2 = fit_kde(class2, kernel)?;
    Ok(ClassifierModel::Kde {
        class1: m1,
        class2: m2,
        priors: priors(class1.len(), class2.len()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Distribution;

    fn ts(d: &Distribution, n: usize, seed: u64) -> TrainingSet {
        TrainingSet::new(d.sample(n, seed).unwrap(), 1).unwrap()
    }

    /// Locate a 1-D decision boundary by bisection on the label.
    fn boundary(model: &ClassifierModel, mut lo: f64, mut hi: f64) -> f64 {
        assert_ne!(
            model.classify(&Point::one_d(lo)),
            model.classify(&Point::one_d(hi)),
            "no sign change in bracket"
        );
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if model.classify(&Point::one_d(mid)) == model.classify(&Point::one_d(lo)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn lda_boundary_sits_between_equal_variance_classes() {
        let c1 = ts(&Distribution::normal(0.0, 1.0).unwrap(), 400, 1);
        let c2 = ts(&Distribution::normal(3.0, 1.0).unwrap(), 400, 2);
        let model = fit_lda(&c1, &c2).unwrap();
        let b = boundary(&model, -2.0, 5.0);
        assert!((b - 1.5).abs() < 0.2, "boundary = {b}");
    }

    #[test]
    fn identical_classes_classify_at_chance() {
        let d = Distribution::normal(0.0, 1.0).unwrap();
        let c1 = ts(&d, 400, 3);
        let c2 = ts(&d, 400, 4);
        let model = fit_lda(&c1, &c2).unwrap();
        let fresh = d.sample(2000, 5).unwrap();
        let as_one = fresh.iter().filter(|p| model.classify(p) == Label::Class1).count();
        let rate = as_one as f64 / fresh.len() as f64;
        assert!((rate - 0.5).abs() < 0.1, "rate = {rate}");
    }

    #[test]
    fn qda_gives_two_boundaries_for_unequal_variances() {
        let c1 = ts(&Distribution::normal(0.0, 1.0).unwrap(), 500, 6);
        let c2 = ts(&Distribution::normal(0.0, 3.0).unwrap(), 500, 7);
        let model = fit_qda(&c1, &c2).unwrap();
        // Narrow class wins in the middle, wide class in both tails.
        let mut flips = 0;
        let mut prev = model.classify(&Point::one_d(-8.0));
        for i in 1..=400 {
            let x = -8.0 + 16.0 * i as f64 / 400.0;
            let label = model.classify(&Point::one_d(x));
            if label != prev {
                flips += 1;
                prev = label;
            }
        }
        assert_eq!(flips, 2);
        assert_eq!(model.classify(&Point::one_d(0.0)), Label::Class1);
        assert_eq!(model.classify(&Point::one_d(7.0)), Label::Class2);
    }

    #[test]
    fn qda_degenerates_to_lda_under_equal_covariance() {
        let c1 = ts(&Distribution::normal(0.0, 1.0).unwrap(), 600, 8);
        let c2 = ts(&Distribution::normal(3.0, 1.0).unwrap(), 600, 9);
        let lda = fit_lda(&c1, &c2).unwrap();
        let qda = fit_qda(&c1, &c2).unwrap();
        let b_lda = boundary(&lda, 0.0, 3.0);
        let b_qda = boundary(&qda, 0.0, 3.0);
        assert!((b_lda - b_qda).abs() < 0.25, "lda {b_lda} vs qda {b_qda}");
    }

    #[test]
    fn separated_classes_have_zero_training_error() {
        let c1 = ts(&Distribution::uniform_union(vec![(0.0, 1.0)]).unwrap(), 100, 10);
        let c2 = ts(&Distribution::uniform_union(vec![(100.0, 101.0)]).unwrap(), 100, 11);
        for model in [fit_lda(&c1, &c2).unwrap(), fit_qda(&c1, &c2).unwrap()] {
            assert!(c1.points().iter().all(|p| model.classify(p) == Label::Class1));
            assert!(c2.points().iter().all(|p| model.classify(p) == Label::Class2));
        }
    }

    #[test]
    fn gaussian_kde_integrates_to_one() {
        let class = ts(&Distribution::normal(2.0, 1.5).unwrap(), 300, 12);
        let kde = fit_kde(&class, KdeKernel::Gaussian).unwrap();
        let (lo, hi) = (2.0 - 12.0, 2.0 + 12.0);
        let n = 20_000;
        let mut integral = 0.0;
        let h = (hi - lo) / n as f64;
        for i in 0..n {
            let a = kde.density(lo + i as f64 * h);
            let b = kde.density(lo + (i + 1) as f64 * h);
            integral += 0.5 * (a + b) * h;
        }
        assert!((integral - 1.0).abs() < 1e-3, "integral = {integral}");
    }

    #[test]
    fn kde_mass_concentrates_at_the_data() {
        let class = ts(&Distribution::normal(0.0, 1.0).unwrap(), 200, 13);
        for kernel in [KdeKernel::Gaussian, KdeKernel::Epanechnikov] {
            let kde = fit_kde(&class, kernel).unwrap();
            assert!(kde.density(0.0) > kde.density(5.0));
        }
    }

    #[test]
    fn epanechnikov_kde_has_compact_support() {
        let class = ts(&Distribution::uniform_union(vec![(0.0, 1.0)]).unwrap(), 100, 14);
        let kde = fit_kde(&class, KdeKernel::Epanechnikov).unwrap();
        let xs: Vec<f64> = class.points().iter().map(|p| p.x()).collect();
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min) - kde.bandwidth();
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + kde.bandwidth();
        assert_eq!(kde.density(lo - 1e-9), 0.0);
        assert_eq!(kde.density(hi + 1e-9), 0.0);
        for i in 0..200 {
            let x = -2.0 + 5.0 * i as f64 / 200.0;
            assert!(kde.density(x) >= 0.0);
        }
    }

    #[test]
    fn kde_rejects_degenerate_input() {
        let flat =
            TrainingSet::new(vec![Point::one_d(1.0), Point::one_d(1.0), Point::one_d(1.0)], 1)
                .unwrap();
        assert!(matches!(fit_kde(&flat, KdeKernel::Gaussian), Err(Error::ZeroSpread)));

        let two_d =
            TrainingSet::new(vec![Point::two_d(0.0, 0.0), Point::two_d(1.0, 1.0)], 1).unwrap();
        assert!(matches!(
            fit_kde(&two_d, KdeKernel::Gaussian),
            Err(Error::MethodInfeasible { .. })
        ));
    }

    #[test]
    fn bayes_rule_basics() {
        assert_eq!(bayes_label(0.5, 0.2, 0.5, 0.1), Label::Class1);
        assert_eq!(bayes_label(0.5, 0.1, 0.5, 0.2), Label::Class2);
        // Exact tie and the two-zero case both go to class 1.
        assert_eq!(bayes_label(0.5, 0.3, 0.5, 0.3), Label::Class1);
        assert_eq!(bayes_label(0.5, 0.0, 0.5, 0.0), Label::Class1);
        // Empty-cell sentinel on one side wins; on both sides it ties.
        assert_eq!(bayes_label(0.5, f64::INFINITY, 0.5, 9.0), Label::Class1);
        assert_eq!(bayes_label(0.5, 3.0, 0.5, f64::INFINITY), Label::Class2);
        assert_eq!(bayes_label(0.5, f64::INFINITY, 0.5, f64::INFINITY), Label::Class1);
    }

    #[test]
    fn singular_covariance_is_reported() {
        let c1 =
            TrainingSet::new(vec![Point::one_d(1.0), Point::one_d(1.0), Point::one_d(1.0)], 1)
                .unwrap();
        let c2 = ts(&Distribution::normal(3.0, 1.0).unwrap(), 50, 15);
        // One degenerate class already sinks QDA; LDA pools, so it needs both.
        assert!(matches!(fit_qda(&c1, &c2), Err(Error::SingularCovariance { .. })));
        assert!(fit_lda(&c1, &c2).is_ok());

        let c2_flat =
            TrainingSet::new(vec![Point::one_d(3.0), Point::one_d(3.0), Point::one_d(3.0)], 2)
                .unwrap();
        assert!(matches!(fit_lda(&c1, &c2_flat), Err(Error::SingularCovariance { .. })));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // Multiplying both densities by one positive constant never
            // changes the label. Power-of-two scales commute exactly with
            // f64 rounding, so the check is sharp even at near-ties.
            #[test]
            fn bayes_rule_is_scale_equivariant(
                p1 in 0.05f64..0.95,
                f1 in 0.0f64..10.0,
                f2 in 0.0f64..10.0,
                scale_exp in -40i32..=40,
            ) {
                let p2 = 1.0 - p1;
                let scale = 2f64.powi(scale_exp);
                prop_assert_eq!(
                    bayes_label(p1, f1, p2, f2),
                    bayes_label(p1, scale * f1, p2, scale * f2)
                );
            }
        }
    }
}
