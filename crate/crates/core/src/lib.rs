//! Sample means of attributed graphs under the graph edit kernel metric.
//!
//! Graphs are dense `m x m x d` attribute matrices (non-edges are zero
//! vectors). The distance between two graphs is the smallest Frobenius
//! distance over node alignments after padding both to a common order; means
//! minimise the sum of squared distances to a sample.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix `f64`, which is what the command line and the data formats use.
//!
//! ```
//! use graphmean::data::{generate, GeneratorSpec};
//! use graphmean::means::{run, Algorithm};
//! use graphmean::Config;
//!
//! let dataset = generate(&GeneratorSpec { letters: "A".into(), count: 30, ..Default::default() })?;
//! let estimate = run(Algorithm::Mmm, &dataset.sample, &Config { seed: 7, ..Config::default() })?;
//! assert!(estimate.dispersion() > 0.0);
//! # Ok::<(), graphmean::Error>(())
//! ```

pub mod align;
pub mod data;
pub mod error;
pub mod eval;
pub mod frechet;
pub mod graph;
pub mod means;
pub mod rng;
pub mod scalar;
pub mod symmetry;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Graph = graph::AttributedGraph<f64>;
pub type Graph32 = graph::AttributedGraph<f32>;
pub type GraphSample = frechet::Sample<f64>;
pub type Estimate = means::MeanEstimate<f64>;
pub type Config = means::MeanConfig<f64>;
