//! Experimental harness: benchmark runs, performance profiles, pairwise
//! comparisons, a consistency simulation and nearest-neighbour classification.
//!
//! Runtime is measured in solved matching problems, never wall-clock time, so
//! every output is a deterministic function of its inputs and seed.

mod bench;
mod classify;
mod consistency;
mod profile;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::means::Algorithm;

pub use bench::{benchmark, BenchConfig, Protocol};
pub use classify::{condensed_prototypes, nn_classify, prototype_sample, Classification};
pub use consistency::{consistency_simulation, ConsistencyRow};
pub use profile::{
    pairwise_comparison, performance_profiles, profiles_csv, performance_ratio, Metric, PairwiseComparison, PerformanceProfile,
    PerformanceTable,
};

/// One algorithm run on one sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub dataset: String,
    pub sample_id: String,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub sample_size: usize,
    /// Sample dispersion `sqrt(V_n)` of the returned mean.
    pub dispersion: f64,
    pub iterations: usize,
    pub matchings: usize,
    pub matchings_until_best: usize,
    /// Constant SGG step size used, if any.
    pub step_size: Option<f64>,
}

impl RunRecord {
    pub fn performance(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Dispersion => self.dispersion,
            Metric::Iterations => self.iterations as f64,
        }
    }
}

/// Records as CSV with a header row.
pub fn records_csv(records: &[RunRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| Error::invalid(e.to_string()))?;
    }
    if records.is_empty() {
        w.write_record([
            "dataset",
            "sample_id",
            "algorithm",
            "seed",
            "sample_size",
            "dispersion",
            "iterations",
            "matchings",
            "matchings_until_best",
            "step_size",
        ])
        .map_err(|e| Error::invalid(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::invalid(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::invalid(e.to_string()))
}

pub(crate) fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    if v.len() % 2 == 1 {
        v[k]
    } else {
        (v[k - 1] + v[k]) / 2.0
    }
}
