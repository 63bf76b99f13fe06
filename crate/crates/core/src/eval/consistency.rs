use rayon::prelude::*;
use serde::Serialize;

use super::median;
use crate::align::distance;
use crate::data::{generate, GeneratorSpec};
use crate::error::Result;
use crate::means::{mmm, MeanConfig};
use crate::rng::derive_seed;
use crate::Graph;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsistencyRow {
    pub n: usize,
    /// Median over trials of `delta(mean_n, prototype)`.
    pub median_distance: f64,
    /// Median over trials of `V_n / n`.
    pub median_normalized_variation: f64,
}

/// Sample noisy copies of `prototype` at each size in `n_grid` and report
/// how far MMM means land from the prototype.
pub fn consistency_simulation(
    prototype: &Graph,
    noise_sigma: f64,
    n_grid: &[usize],
    trials: usize,
    cfg: &MeanConfig<f64>,
) -> Result<Vec<ConsistencyRow>> {
    n_grid
        .iter()
        .map(|&n| {
            let runs: Vec<(f64, f64)> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let seed = derive_seed(cfg.seed, &[n as u64, t as u64]);
                    let spec = GeneratorSpec {
                        prototype: Some(prototype.clone()),
                        noise_sigma,
                        count: n,
                        seed,
                        ..GeneratorSpec::default()
                    };
                    let ds = generate(&spec)?;
                    let est = mmm(&ds.sample, &cfg.with_seed(seed))?;
                    let d = distance(&est.mean, prototype, &cfg.solver)?;
                    Ok((d, est.best_variation / n as f64))
                })
                .collect::<Result<_>>()?;
            let (d, v): (Vec<f64>, Vec<f64>) = runs.into_iter().unzip();
            Ok(ConsistencyRow { n, median_distance: median(d), median_normalized_variation: median(v) })
        })
        .collect()
}
