//! Density estimation from Monte Carlo Voronoi cell areas, and two-class
//! Bayes classification built on it.
//!
//! The estimator counts how many points of a seeded uniform reference sample
//! fall nearest to each training point; those counts are proportional to
//! Voronoi cell areas, and cell area is inversely proportional to local
//! density. A clubbing step (sum the counts of the `k` nearest cells) trades
//! bias for a ~`1/k` variance cut, and a relative-frequency threshold pushes
//! the estimate toward zero outside the support.
//!
//! The crate also ships the comparison classifiers (LDA, QDA, Gaussian and
//! Epanechnikov kernel Bayes), closed-form and Monte Carlo checks for the
//! order-statistics spacing results the estimator rests on, and a seeded
//! experiment harness with CSV output behind the `voronoi-class` CLI.

pub mod cases;
pub mod classifiers;
pub mod cli;
pub mod config;
pub mod density;
pub mod distributions;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod linalg;
pub mod neighbors;
pub mod order_stats;
pub mod rng;

pub use error::{Error, Result};
pub use geometry::{Metric, Point, SupportWindow};
