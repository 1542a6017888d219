//! The simulation harness: draw a case's training and test data, fit every
//! requested method, tally the two error directions, aggregate over seeds,
//! and export CSV.
//!
//! Tables from single random runs are not reproducible targets, so the
//! harness always runs a seed list and reports per-seed rows plus one
//! aggregate row (mean, and standard deviation once there are two seeds)
//! per method. Seeds execute in parallel; every row is derived
//! deterministically from its seed, and output ordering is canonical, so a
//! run is byte-identical at any thread count.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::cases::CasePreset;
use crate::classifiers::{
    fit_kde_classifier, fit_lda, fit_qda, ClassifierModel, KdeKernel, Label,
};
use crate::density::{fit, TrainingSet, Variant};
use crate::distributions::Distribution;
use crate::error::{Error, Result};
use crate::geometry::{Point, SupportWindow};
use crate::rng::derive_seed;

/// Stream tags for deriving per-purpose seeds from one run seed.
mod stream {
    pub const TRAIN1: u64 = 1;
    pub const TRAIN2: u64 = 2;
    pub const TEST1: u64 = 3;
    pub const TEST2: u64 = 4;
    pub const REF1: u64 = 5;
    pub const REF2: u64 = 6;
}

/// A method row, named exactly as in the result tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Nn1,
    Nn10,
    Nn25,
    Lda,
    Qda,
    GaussianKernel,
    EpanechnikovKernel,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Nn1,
        Method::Nn10,
        Method::Nn25,
        Method::Lda,
        Method::Qda,
        Method::GaussianKernel,
        Method::EpanechnikovKernel,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Nn1 => "NN1",
            Method::Nn10 => "NN10",
            Method::Nn25 => "NN25",
            Method::Lda => "LDA",
            Method::Qda => "QDA",
            Method::GaussianKernel => "G-Ker",
            Method::EpanechnikovKernel => "E-Ker",
        }
    }

    pub fn parse(s: &str) -> Result<Method> {
        Method::ALL
            .iter()
            .copied()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownMethod {
                name: s.to_string(),
                valid: Method::ALL.map(|m| m.name()).join(", "),
            })
    }

    /// Club size for the Voronoi rows; `None` for the baselines.
    pub fn voronoi_k(&self) -> Option<usize> {
        match self {
            Method::Nn1 => Some(1),
            Method::Nn10 => Some(10),
            Method::Nn25 => Some(25),
            _ => None,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A fully specified run: case data, sizes, methods and seeds.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub case_name: String,
    pub class1: Distribution,
    pub class2: Distribution,
    pub window1: SupportWindow,
    pub window2: SupportWindow,
    /// Training points per class.
    pub n_train: usize,
    /// Test points per class.
    pub n_test: usize,
    /// Reference uniforms per class.
    pub n_uniforms: usize,
    pub methods: Vec<Method>,
    /// Boundary threshold; `None` picks `max(0.02, 5 / n_train)`.
    pub r: Option<f64>,
    pub seeds: Vec<u64>,
}

impl ExperimentConfig {
    /// Paper-style defaults for a preset: 200 training and 100 test points
    /// per class, 1000 reference uniforms, seeds 1..=20, the preset's
    /// method rows.
    pub fn from_case(case: &CasePreset) -> Self {
        ExperimentConfig {
            case_name: case.name.to_string(),
            class1: case.class1.clone(),
            class2: case.class2.clone(),
            window1: case.window1.clone(),
            window2: case.window2.clone(),
            n_train: 200,
            n_test: 100,
            n_uniforms: 1000,
            methods: case.methods.clone(),
            r: None,
            seeds: (1..=20).collect(),
        }
    }

    /// Effective boundary threshold.
    pub fn threshold_r(&self) -> f64 {
        self.r.unwrap_or_else(|| (5.0 / self.n_train as f64).max(0.02))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_train < 2 {
            return Err(Error::TrainingSetTooSmall { min: 2, got: self.n_train });
        }
        if self.n_test < 1 {
            return Err(Error::InvalidParameter("need at least one test point per class".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidParameter("no methods requested".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidParameter("no seeds requested".into()));
        }
        if let Some(r) = self.r {
            if !(0.0 < r && r <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "threshold r must be in (0, 1], got {r}"
                )));
            }
        }
        let dim = self.class1.dim();
        if self.class2.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: self.class2.dim() });
        }
        for w in [&self.window1, &self.window2] {
            if w.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: w.dim() });
            }
        }
        Ok(())
    }
}

/// Directional error tally over one test set: class-1 points predicted as
/// class 2 count toward `minus1`, class-2 points predicted as class 1 toward
/// `plus1`, correct decisions toward `zero`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusionSummary {
    pub minus1: usize,
    pub zero: usize,
    pub plus1: usize,
}

impl ConfusionSummary {
    pub fn total(&self) -> usize {
        self.minus1 + self.zero + self.plus1
    }

    pub fn misclassification_probability(&self) -> f64 {
        (self.minus1 + self.plus1) as f64 / self.total() as f64
    }
}

/// One method's tally for one seed.
#[derive(Debug, Clone, Copy)]
pub struct SeedOutcome {
    pub seed: u64,
    pub summary: ConfusionSummary,
}

/// Seed-aggregated numbers for one method.
#[derive(Debug, Clone)]
pub struct MethodOutcome {
    pub per_seed: Vec<SeedOutcome>,
    pub mean_minus1: f64,
    pub mean_zero: f64,
    pub mean_plus1: f64,
    pub mean_misclassification: f64,
    /// Sample standard deviation over seeds; present once there are two.
    pub std_misclassification: Option<f64>,
}

/// A method's result: aggregated tallies, or the error that stopped it.
#[derive(Debug, Clone)]
pub struct MethodResult {
    pub method: Method,
    pub outcome: std::result::Result<MethodOutcome, String>,
}

/// Everything `run_experiment` produces.
#[derive(Debug, Clone)]
pub struct ExperimentResults {
    pub config: ExperimentConfig,
    pub methods: Vec<MethodResult>,
}

/// Cap rayon's parallelism with `VORONOI_CLASS_THREADS` when set.
pub(crate) fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let cap = std::env::var("VORONOI_CLASS_THREADS").ok().and_then(|v| v.parse::<usize>().ok());
    match cap {
        Some(n) if n >= 1 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        _ => f(),
    }
}

fn fit_method(
    method: Method,
    config: &ExperimentConfig,
    train1: &TrainingSet,
    train2: &TrainingSet,
    seed: u64,
) -> Result<ClassifierModel> {
    match method {
        Method::Lda => fit_lda(train1, train2),
        Method::Qda => fit_qda(train1, train2),
        Method::GaussianKernel => fit_kde_classifier(train1, train2, KdeKernel::Gaussian),
        Method::EpanechnikovKernel => fit_kde_classifier(train1, train2, KdeKernel::Epanechnikov),
        _ => {
            let k = method.voronoi_k().expect("NN method");
            let variant = Variant::Corrected { k, r: config.threshold_r() };
            let m1 =
                fit(train1, &config.window1, variant, config.n_uniforms, derive_seed(seed, stream::REF1))?;
            let m2 =
                fit(train2, &config.window2, variant, config.n_uniforms, derive_seed(seed, stream::REF2))?;
            Ok(ClassifierModel::voronoi(m1, m2))
        }
    }
}

fn run_seed(
    config: &ExperimentConfig,
    seed: u64,
) -> Result<Vec<(Method, std::result::Result<ConfusionSummary, String>)>> {
    let train1 = TrainingSet::new(
        config.class1.sample(config.n_train, derive_seed(seed, stream::TRAIN1))?,
        1,
    )?;
    let train2 = TrainingSet::new(
        config.class2.sample(config.n_train, derive_seed(seed, stream::TRAIN2))?,
        2,
    )?;
    let test1 = config.class1.sample(config.n_test, derive_seed(seed, stream::TEST1))?;
    let test2 = config.class2.sample(config.n_test, derive_seed(seed, stream::TEST2))?;

    let mut out = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        let tally = fit_method(method, config, &train1, &train2, seed).map(|model| {
            let minus1 =
                test1.iter().filter(|p| model.classify(p) == Label::Class2).count();
            let plus1 = test2.iter().filter(|p| model.classify(p) == Label::Class1).count();
            ConfusionSummary {
                minus1,
                zero: test1.len() + test2.len() - minus1 - plus1,
                plus1,
            }
        });
        out.push((method, tally.map_err(|e| e.to_string())));
    }
    Ok(out)
}

/// Run every (seed, method) combination, tally test decisions, and aggregate
/// misclassification over seeds per method. A method that fails (for
/// example a kernel baseline on two-dimensional data) is recorded with its
/// error while the remaining methods proceed.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResults> {
    config.validate()?;

    let mut seeds = config.seeds.clone();
    seeds.sort_unstable();
    seeds.dedup();

    let per_seed: Vec<(u64, Vec<(Method, std::result::Result<ConfusionSummary, String>)>)> =
        seeds
            .par_iter()
            .map(|&seed| run_seed(config, seed).map(|rows| (seed, rows)))
            .collect::<Result<_>>()?;

    let mut methods = Vec::with_capacity(config.methods.len());
    for &method in &config.methods {
        let mut outcomes = Vec::with_capacity(seeds.len());
        let mut failure: Option<String> = None;
        for (seed, rows) in &per_seed {
            let (_, tally) = rows.iter().find(|(m, _)| *m == method).expect("method row");
            match tally {
                Ok(summary) => outcomes.push(SeedOutcome { seed: *seed, summary: *summary }),
                Err(e) => {
                    failure.get_or_insert_with(|| format!("seed {seed}: {e}"));
                }
            }
        }
        let outcome = match failure {
            Some(e) => Err(e),
            None => Ok(aggregate(outcomes)),
        };
        methods.push(MethodResult { method, outcome });
    }
    Ok(ExperimentResults { config: config.clone(), methods })
}

fn aggregate(per_seed: Vec<SeedOutcome>) -> MethodOutcome {
    let n = per_seed.len() as f64;
    let mean_minus1 = per_seed.iter().map(|o| o.summary.minus1 as f64).sum::<f64>() / n;
    let mean_zero = per_seed.iter().map(|o| o.summary.zero as f64).sum::<f64>() / n;
    let mean_plus1 = per_seed.iter().map(|o| o.summary.plus1 as f64).sum::<f64>() / n;
    let probs: Vec<f64> =
        per_seed.iter().map(|o| o.summary.misclassification_probability()).collect();
    let mean = probs.iter().sum::<f64>() / n;
    let std = (per_seed.len() >= 2).then(|| {
        (probs.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    });
    MethodOutcome {
        per_seed,
        mean_minus1,
        mean_zero,
        mean_plus1,
        mean_misclassification: mean,
        std_misclassification: std,
    }
}

pub const RESULTS_CSV_HEADER: &str =
    "case,method,n_train,n_uniforms,seed,minus1,zero,plus1,misclass_prob,misclass_std,agg";

/// Write the results table: one row per (seed, method) sorted by seed then
/// method name, then one aggregate row per method flagged `agg=true`.
pub fn write_results_csv<W: Write>(results: &ExperimentResults, mut w: W) -> Result<()> {
    writeln!(w, "{RESULTS_CSV_HEADER}")?;
    let config = &results.config;

    let mut detail: Vec<(u64, Method, ConfusionSummary)> = Vec::new();
    for m in &results.methods {
        if let Ok(outcome) = &m.outcome {
            for s in &outcome.per_seed {
                detail.push((s.seed, m.method, s.summary));
            }
        }
    }
    detail.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.name().cmp(b.1.name())));
    for (seed, method, s) in detail {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},,false",
            config.case_name,
            method.name(),
            config.n_train,
            config.n_uniforms,
            seed,
            s.minus1,
            s.zero,
            s.plus1,
            s.misclassification_probability(),
        )?;
    }

    let mut aggs: Vec<(&'static str, &MethodOutcome)> = results
        .methods
        .iter()
        .filter_map(|m| m.outcome.as_ref().ok().map(|o| (m.method.name(), o)))
        .collect();
    aggs.sort_by(|a, b| a.0.cmp(b.0));
    for (name, o) in aggs {
        writeln!(
            w,
            "{},{},{},{},,{},{},{},{},{},true",
            config.case_name,
            name,
            config.n_train,
            config.n_uniforms,
            o.mean_minus1,
            o.mean_zero,
            o.mean_plus1,
            o.mean_misclassification,
            o.std_misclassification.map(|s| s.to_string()).unwrap_or_default(),
        )?;
    }
    Ok(())
}

/// Write the results table to a file.
pub fn export_results(results: &ExperimentResults, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_results_csv(results, std::io::BufWriter::new(file))
}

pub const PLOT_CSV_HEADER: &str =
    "x,variant,fhat_class1,fhat_class2,true_pdf_class1,true_pdf_class2";

/// Export density curves for a one-dimensional case: for each requested NN
/// variant, both classes' fitted densities and the true densities over a
/// shared grid spanning both reference windows.
pub fn write_density_plot_csv<W: Write>(
    config: &ExperimentConfig,
    seed: u64,
    grid_points: usize,
    mut w: W,
) -> Result<()> {
    config.validate()?;
    if config.class1.dim() != 1 {
        return Err(Error::MethodInfeasible {
            method: "plot export".into(),
            reason: "plot export is 1D-only".into(),
        });
    }
    if grid_points < 500 {
        return Err(Error::InvalidParameter(format!(
            "plot grid needs at least 500 points, got {grid_points}"
        )));
    }
    let nn_methods: Vec<Method> =
        config.methods.iter().copied().filter(|m| m.voronoi_k().is_some()).collect();
    if nn_methods.is_empty() {
        return Err(Error::InvalidParameter("no NN method requested for the plot".into()));
    }

    let (lo1, hi1) = interval_bounds(&config.window1)?;
    let (lo2, hi2) = interval_bounds(&config.window2)?;
    let (lo, hi) = (lo1.min(lo2), hi1.max(hi2));
    let grid: Vec<Point> = (0..grid_points)
        .map(|i| Point::one_d(lo + (hi - lo) * i as f64 / (grid_points - 1) as f64))
        .collect();

    let train1 = TrainingSet::new(
        config.class1.sample(config.n_train, derive_seed(seed, stream::TRAIN1))?,
        1,
    )?;
    let train2 = TrainingSet::new(
        config.class2.sample(config.n_train, derive_seed(seed, stream::TRAIN2))?,
        2,
    )?;

    writeln!(w, "{PLOT_CSV_HEADER}")?;
    for method in nn_methods {
        let k = method.voronoi_k().expect("NN method");
        let variant = Variant::Corrected { k, r: config.threshold_r() };
        let m1 = fit(&train1, &config.window1, variant, config.n_uniforms, derive_seed(seed, stream::REF1))?;
        let m2 = fit(&train2, &config.window2, variant, config.n_uniforms, derive_seed(seed, stream::REF2))?;
        for p in &grid {
            let f1 = m1.density_at(p).or_infinite();
            let f2 = m2.density_at(p).or_infinite();
            let t1 = config.class1.pdf(p).map(|v| v.to_string()).unwrap_or_default();
            let t2 = config.class2.pdf(p).map(|v| v.to_string()).unwrap_or_default();
            writeln!(w, "{},{},{},{},{},{}", p.x(), method.name(), f1, f2, t1, t2)?;
        }
    }
    Ok(())
}

/// Write the plot table to a file.
pub fn export_density_plot_data(
    config: &ExperimentConfig,
    seed: u64,
    grid_points: usize,
    path: &Path,
) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_density_plot_csv(config, seed, grid_points, std::io::BufWriter::new(file))
}

fn interval_bounds(w: &SupportWindow) -> Result<(f64, f64)> {
    match w {
        SupportWindow::Interval { lo, hi } => Ok((*lo, *hi)),
        _ => Err(Error::MethodInfeasible {
            method: "plot export".into(),
            reason: "plot export is 1D-only".into(),
        }),
    }
}
