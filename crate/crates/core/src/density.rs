//! Density estimation from Voronoi cell areas.
//!
//! The area of the Voronoi cell of each training point is estimated by
//! counting how many points of a uniform reference sample over a covering
//! window fall nearest to it. Cell area is inversely proportional to local
//! density, which gives a nearest-neighbour density estimate without ever
//! constructing the Voronoi diagram.
//!
//! Two variants:
//!
//! * **Plain**: `f(x) = N / (g_j * n)` where `j` is the training point
//!   nearest to `x` and `g_j` its reference count. An empty cell (`g_j = 0`)
//!   means the cell captured no reference mass at the current resolution; its
//!   estimate is the sentinel [`DensityValue::EmptyCell`], read as an
//!   arbitrarily small cell, i.e. unboundedly large density.
//! * **Corrected**: counts are first *clubbed* — each sub-threshold cell's
//!   weight becomes the summed counts of its `k` nearest sub-threshold cells
//!   (itself included), which cuts the variance of the estimate by roughly
//!   `1/k`. Cells whose relative frequency reaches the threshold `r` sit on
//!   or outside the support boundary; their weight is instead inflated to
//!   `k * g_j`, driving the estimated density toward zero there. The clubbed
//!   weights are then rescaled so the estimated cell areas sum to the window
//!   measure, and `f(x) = 1 / (n * area_j)`.
//!
//! All nearest-point queries compare squared Euclidean distance in the
//! ambient space with ties to the lowest index. For points constrained to a
//! circle this ordering coincides with arc-length ordering, so no metric
//! parameter is needed here.

use crate::error::{Error, Result};
use crate::geometry::{Point, SupportWindow};
use crate::neighbors::NearestIndex;

/// The labelled sample of one class.
#[derive(Debug, Clone)]
pub struct TrainingSet {
    points: Vec<Point>,
    label: usize,
}

impl TrainingSet {
    /// Validates size (>= 2), a common dimension and finite coordinates.
    /// Exact duplicate points are allowed but logged: under the lowest-index
    /// tie rule every duplicate after the first gets a zero count.
    pub fn new(points: Vec<Point>, label: usize) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TrainingSetTooSmall { min: 2, got: points.len() });
        }
        let dim = points[0].dim();
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
            }
            if !p.is_finite() {
                return Err(Error::InvalidParameter("non-finite training coordinate".into()));
            }
        }
        let mut sorted = points.clone();
        sorted.sort_by(|a, b| a.x().total_cmp(&b.x()).then(a.y().total_cmp(&b.y())));
        let dups = sorted.windows(2).filter(|w| w[0] == w[1]).count();
        if dups > 0 {
            log::warn!("training set (label {label}) contains {dups} duplicate point(s)");
        }
        Ok(TrainingSet { points, label })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn label(&self) -> usize {
        self.label
    }
}

/// The uniform sample used to estimate cell areas, with its window.
#[derive(Debug, Clone)]
pub struct ReferenceSample {
    window: SupportWindow,
    points: Vec<Point>,
    seed: u64,
}

impl ReferenceSample {
    pub fn generate(window: &SupportWindow, count: usize, seed: u64) -> Result<Self> {
        let points = window.sample_uniform(count, seed)?;
        Ok(ReferenceSample { window: window.clone(), points, seed })
    }

    pub fn window(&self) -> &SupportWindow {
        &self.window
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Raw cell counts `g_j` and their normalised weights `w_j = g_j / N`.
#[derive(Debug, Clone)]
pub struct RawWeights {
    counts: Vec<u64>,
    n_reference: usize,
}

impl RawWeights {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n_reference(&self) -> usize {
        self.n_reference
    }

    /// Normalised weights; they sum to 1 since the counts sum to N exactly.
    pub fn weights(&self) -> Vec<f64> {
        self.counts.iter().map(|&g| g as f64 / self.n_reference as f64).collect()
    }
}

/// Clubbed weights and the resulting cell-area estimates.
#[derive(Debug, Clone)]
pub struct CorrectedWeights {
    clubbed: Vec<f64>,
    cell_areas: Vec<f64>,
    r: f64,
    k: usize,
    window_measure: f64,
}

impl CorrectedWeights {
    /// Clubbed weights before rescaling (`g*`).
    pub fn clubbed(&self) -> &[f64] {
        &self.clubbed
    }

    /// Estimated cell areas (`g**`); they sum to the window measure.
    pub fn cell_areas(&self) -> &[f64] {
        &self.cell_areas
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn window_measure(&self) -> f64 {
        self.window_measure
    }
}

/// Count, for every training point, how many reference points are nearest to
/// it (ties to the lowest training index). The counts sum to the reference
/// size exactly.
pub fn count_raw_weights(training: &TrainingSet, reference: &ReferenceSample) -> Result<RawWeights> {
    if reference.is_empty() {
        return Err(Error::EmptyReference);
    }
    if reference.window().dim() != training.dim() {
        return Err(Error::DimensionMismatch {
            expected: training.dim(),
            got: reference.window().dim(),
        });
    }
    let index = NearestIndex::build(training.points());
    let mut counts = vec![0u64; training.len()];
    for u in reference.points() {
        counts[index.nearest(u)] += 1;
    }
    debug_assert_eq!(counts.iter().sum::<u64>() as usize, reference.len());
    Ok(RawWeights { counts, n_reference: reference.len() })
}

/// Apply the clubbing and boundary correction to raw counts.
///
/// For each cell `j` with relative frequency `g_j / N < r`, the clubbed
/// weight is the summed counts of `j` itself and its `k - 1` nearest
/// *sub-threshold* training points (over-threshold cells are boundary cells;
/// letting their mass leak into interior clubs would inflate the
/// normalisation and bias every interior estimate). For cells at or above
/// the threshold the weight is `k * g_j`. The clubbed weights are rescaled
/// so the cell-area estimates sum to the window measure.
///
/// `k = 1` reproduces the raw weights for any `r`.
pub fn correct_weights(
    raw: &RawWeights,
    training: &TrainingSet,
    r: f64,
    k: usize,
    window_measure: f64,
) -> Result<CorrectedWeights> {
    let n = training.len();
    if !(0.0 < r && r <= 1.0) {
        return Err(Error::InvalidParameter(format!("threshold r must be in (0, 1], got {r}")));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "club size k must satisfy 1 <= k <= {n}, got {k}"
        )));
    }
    if window_measure <= 0.0 {
        return Err(Error::InvalidWindow("window measure must be positive".into()));
    }
    if raw.counts().len() != n {
        return Err(Error::InvalidParameter("weights are not aligned with the training set".into()));
    }

    let counts = raw.counts();
    let big_n = raw.n_reference() as f64;
    let sub_threshold: Vec<bool> =
        counts.iter().map(|&g| (g as f64 / big_n) < r).collect();
    let points = training.points();

    let mut clubbed = vec![0.0f64; n];
    // Scratch list of (squared distance, index) pairs, rebuilt per point.
    let mut order: Vec<(f64, usize)> = Vec::with_capacity(n);
    for j in 0..n {
        if !sub_threshold[j] {
            clubbed[j] = k as f64 * counts[j] as f64;
            continue;
        }
        let mut sum = counts[j] as f64;
        if k > 1 {
            order.clear();
            for (i, p) in points.iter().enumerate() {
                if i != j && sub_threshold[i] {
                    order.push((points[j].dist2(p), i));
                }
            }
            order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for &(_, i) in order.iter().take(k - 1) {
                sum += counts[i] as f64;
            }
        }
        clubbed[j] = sum;
    }

    let total: f64 = clubbed.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidParameter("all clubbed weights are zero".into()));
    }
    let cell_areas: Vec<f64> = clubbed.iter().map(|&g| window_measure * g / total).collect();
    Ok(CorrectedWeights { clubbed, cell_areas, r, k, window_measure })
}

/// Which estimate a fitted model evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Variant {
    /// Reciprocal raw counts, `N / (g_j * n)`.
    Plain,
    /// Clubbed and boundary-corrected cell areas, `1 / (n * area_j)`.
    Corrected { k: usize, r: f64 },
}

#[derive(Debug, Clone)]
enum FittedWeights {
    Raw(RawWeights),
    Corrected(CorrectedWeights),
}

/// A fitted single-class density model, immutable and evaluable anywhere in
/// the training dimension.
#[derive(Debug, Clone)]
pub struct VoronoiDensityModel {
    training: TrainingSet,
    weights: FittedWeights,
    index: NearestIndex,
}

/// Outcome of a single density evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DensityValue {
    Finite(f64),
    /// The nearest cell captured no reference mass: a vanishing area
    /// estimate, i.e. an unbounded density. Callers choose the policy; the
    /// classifier reads it as plus infinity.
    EmptyCell,
}

impl DensityValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            DensityValue::Finite(v) => Some(*v),
            DensityValue::EmptyCell => None,
        }
    }

    /// Numeric view with the empty-cell sentinel mapped to +inf.
    pub fn or_infinite(&self) -> f64 {
        match self {
            DensityValue::Finite(v) => *v,
            DensityValue::EmptyCell => f64::INFINITY,
        }
    }
}

/// Estimate the class density end to end: draw the uniform reference sample,
/// count cells, and (for the corrected variant) club and rescale.
///
/// The window should cover the sample range; training points outside it are
/// legal but logged, since their cells then lean on reference mass from
/// inside the window only.
pub fn fit(
    training: &TrainingSet,
    window: &SupportWindow,
    variant: Variant,
    n_uniforms: usize,
    seed: u64,
) -> Result<VoronoiDensityModel> {
    if window.dim() != training.dim() {
        return Err(Error::DimensionMismatch { expected: training.dim(), got: window.dim() });
    }
    if n_uniforms < training.len() {
        return Err(Error::InvalidParameter(format!(
            "need at least as many reference uniforms as training points ({} < {})",
            n_uniforms,
            training.len()
        )));
    }
    let outside = training.points().iter().filter(|p| !window.contains(p)).count();
    if outside > 0 {
        log::warn!(
            "{outside} of {} training point(s) (label {}) lie outside the reference window",
            training.len(),
            training.label()
        );
    }

    let reference = ReferenceSample::generate(window, n_uniforms, seed)?;
    let raw = count_raw_weights(training, &reference)?;
    let weights = match variant {
        Variant::Plain => FittedWeights::Raw(raw),
        Variant::Corrected { k, r } => {
            FittedWeights::Corrected(correct_weights(&raw, training, r, k, window.measure())?)
        }
    };
    Ok(VoronoiDensityModel {
        training: training.clone(),
        weights,
        index: NearestIndex::build(training.points()),
    })
}

impl VoronoiDensityModel {
    pub fn training(&self) -> &TrainingSet {
        &self.training
    }

    pub fn variant(&self) -> Variant {
        match &self.weights {
            FittedWeights::Raw(_) => Variant::Plain,
            FittedWeights::Corrected(c) => Variant::Corrected { k: c.k(), r: c.r() },
        }
    }

    pub fn raw_weights(&self) -> Option<&RawWeights> {
        match &self.weights {
            FittedWeights::Raw(r) => Some(r),
            FittedWeights::Corrected(_) => None,
        }
    }

    pub fn corrected_weights(&self) -> Option<&CorrectedWeights> {
        match &self.weights {
            FittedWeights::Raw(_) => None,
            FittedWeights::Corrected(c) => Some(c),
        }
    }

    /// Density estimate at `x`: locate the training point nearest to `x`
    /// (ties to the lowest index) and read off its cell's estimate.
    pub fn density_at(&self, x: &Point) -> DensityValue {
        debug_assert_eq!(x.dim(), self.training.dim());
        let j = self.index.nearest(x);
        let n = self.training.len() as f64;
        match &self.weights {
            FittedWeights::Raw(raw) => {
                let g = raw.counts()[j];
                if g == 0 {
                    DensityValue::EmptyCell
                } else {
                    DensityValue::Finite(raw.n_reference() as f64 / (g as f64 * n))
                }
            }
            FittedWeights::Corrected(c) => {
                let area = c.cell_areas()[j];
                if area <= 0.0 {
                    DensityValue::EmptyCell
                } else {
                    DensityValue::Finite(1.0 / (n * area))
                }
            }
        }
    }

    /// Evaluate over a grid, mapping the empty-cell sentinel to +inf.
    pub fn density_curve(&self, grid: &[Point]) -> Vec<(Point, f64)> {
        grid.iter().map(|p| (*p, self.density_at(p).or_infinite())).collect()
    }
}
