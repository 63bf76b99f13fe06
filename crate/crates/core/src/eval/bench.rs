use rand::seq::index::sample as choose;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::RunRecord;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::frechet::Sample;
use crate::means::{run, Algorithm, MeanConfig, MeanEstimate, StepSize, SGG_STEP_GRID};
use crate::rng::{derive_seed, rng_from, tag};

/// How samples are drawn from each dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Protocol {
    /// `count` random subsets per dataset, sizes uniform in `size_range`
    /// (inclusive, capped at the dataset size).
    RandomSamples { count: usize, size_range: (usize, usize) },
    /// Every class is a sample, run `replicates` times with different seeds.
    ClassSamples { replicates: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    /// Base configuration; the seed is the root of all trial seeds.
    pub mean: MeanConfig<f64>,
    pub protocol: Protocol,
    /// Constant SGG step sizes to try.
    pub sgg_grid: Vec<f64>,
    /// Trials averaged when selecting an SGG step size per class.
    pub eta_selection_trials: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            mean: MeanConfig::default(),
            protocol: Protocol::RandomSamples { count: 10, size_range: (5, 20) },
            sgg_grid: SGG_STEP_GRID.to_vec(),
            eta_selection_trials: 10,
        }
    }
}

struct Cell {
    dataset: usize,
    sample_id: String,
    /// Groups replicates of one class for step-size selection.
    group: Option<String>,
    sample: Sample<f64>,
    seed: u64,
}

fn cells(datasets: &[Dataset], bench: &BenchConfig) -> Result<Vec<Cell>> {
    let root = bench.mean.seed;
    let mut out = Vec::new();
    for (d, ds) in datasets.iter().enumerate() {
        let dtag = tag(&ds.name);
        match &bench.protocol {
            Protocol::RandomSamples { count, size_range: (lo, hi) } => {
                if *lo < 1 || lo > hi {
                    return Err(Error::invalid("size_range must satisfy 1 <= lo <= hi"));
                }
                if *lo > ds.len() {
                    return Err(Error::invalid(format!(
                        "dataset `{}` has {} graphs, fewer than the minimum sample size {lo}",
                        ds.name,
                        ds.len()
                    )));
                }
                for k in 0..*count {
                    let mut rng = rng_from(root, &[dtag, k as u64]);
                    let size = rng.gen_range(*lo..=(*hi).min(ds.len()));
                    let mut idx = choose(&mut rng, ds.len(), size).into_vec();
                    idx.sort_unstable();
                    out.push(Cell {
                        dataset: d,
                        sample_id: format!("r{k}"),
                        group: None,
                        sample: ds.sample.subset(&idx)?,
                        seed: derive_seed(root, &[dtag, k as u64, 1]),
                    });
                }
            }
            Protocol::ClassSamples { replicates } => {
                if ds.sample.labels().is_none() {
                    return Err(Error::invalid(format!("class samples need labels; `{}` has none", ds.name)));
                }
                for (class, idx) in ds.classes()? {
                    let sample = ds.sample.subset(&idx)?;
                    for r in 0..*replicates {
                        out.push(Cell {
                            dataset: d,
                            sample_id: format!("{class}#{r}"),
                            group: Some(class.clone()),
                            sample: sample.clone(),
                            seed: derive_seed(root, &[dtag, tag(&class), r as u64]),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

fn trial_cfg(base: &MeanConfig<f64>, seed: u64, eta: Option<f64>) -> MeanConfig<f64> {
    MeanConfig {
        seed,
        solver: base.solver.with_seed(derive_seed(seed, &[tag("solver")])),
        step_size: eta.map(StepSize::Constant).or(base.step_size),
        ..base.clone()
    }
}

fn sgg_dispersion(sample: &Sample<f64>, base: &MeanConfig<f64>, seed: u64, eta: f64) -> Result<f64> {
    Ok(run(Algorithm::Sgg, sample, &trial_cfg(base, seed, Some(eta)))?.dispersion())
}

/// Step size with the best average dispersion over selection trials (first
/// in grid order on ties).
fn select_eta(sample: &Sample<f64>, bench: &BenchConfig, key: &[u64]) -> Result<f64> {
    let mut best = (f64::INFINITY, bench.sgg_grid[0]);
    for &eta in &bench.sgg_grid {
        let total: f64 = (0..bench.eta_selection_trials)
            .into_par_iter()
            .map(|t| {
                let mut tags = vec![tag("eta-selection")];
                tags.extend_from_slice(key);
                tags.push(t as u64);
                sgg_dispersion(sample, &bench.mean, derive_seed(bench.mean.seed, &tags), eta)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum();
        let avg = total / bench.eta_selection_trials as f64;
        if avg < best.0 {
            best = (avg, eta);
        }
    }
    Ok(best.1)
}

/// Run every algorithm on every sample. Records come out ordered by dataset,
/// sample, then the order of `algorithms`.
///
/// Each (sample, algorithm) pair gets its own seed, so algorithms draw
/// independent random initial graphs; a record's `seed` reproduces its run.
pub fn benchmark(datasets: &[Dataset], algorithms: &[Algorithm], bench: &BenchConfig) -> Result<Vec<RunRecord>> {
    bench.mean.validate()?;
    if algorithms.contains(&Algorithm::Sgg) && bench.sgg_grid.is_empty() {
        return Err(Error::invalid("SGG needs a nonempty step-size grid"));
    }
    if bench.eta_selection_trials < 1 {
        return Err(Error::invalid("eta_selection_trials must be at least 1"));
    }
    let cells = cells(datasets, bench)?;

    // one selected step size per (dataset, class) for the class protocol
    let mut chosen_eta = std::collections::BTreeMap::new();
    if algorithms.contains(&Algorithm::Sgg) {
        let groups: Vec<&Cell> = cells
            .iter()
            .filter(|c| c.group.is_some() && c.sample_id.ends_with("#0"))
            .collect();
        let etas = groups
            .par_iter()
            .map(|c| {
                let class = c.group.as_deref().expect("filtered");
                select_eta(&c.sample, bench, &[tag(&datasets[c.dataset].name), tag(class)])
            })
            .collect::<Result<Vec<_>>>()?;
        for (c, eta) in groups.iter().zip(etas) {
            chosen_eta.insert((c.dataset, c.group.clone()), eta);
        }
    }

    let jobs: Vec<(&Cell, Algorithm)> = cells.iter().flat_map(|c| algorithms.iter().map(move |&a| (c, a))).collect();
    jobs.par_iter()
        .map(|&(cell, alg)| {
            let base = &bench.mean;
            let seed = derive_seed(cell.seed, &[tag(alg.name())]);
            let (est, eta) = match (alg, &cell.group) {
                (Algorithm::Sgg, Some(_)) => {
                    let eta = chosen_eta[&(cell.dataset, cell.group.clone())];
                    (run(alg, &cell.sample, &trial_cfg(base, seed, Some(eta)))?, Some(eta))
                }
                (Algorithm::Sgg, None) => {
                    let mut best: Option<(MeanEstimate<f64>, f64)> = None;
                    for &eta in &bench.sgg_grid {
                        let est = run(alg, &cell.sample, &trial_cfg(base, seed, Some(eta)))?;
                        if best.as_ref().map_or(true, |(b, _)| est.best_variation < b.best_variation) {
                            best = Some((est, eta));
                        }
                    }
                    let (est, eta) = best.expect("nonempty grid");
                    (est, Some(eta))
                }
                _ => (run(alg, &cell.sample, &trial_cfg(base, seed, None))?, None),
            };
            Ok(RunRecord {
                dataset: datasets[cell.dataset].name.clone(),
                sample_id: cell.sample_id.clone(),
                algorithm: alg,
                seed,
                sample_size: cell.sample.len(),
                dispersion: est.dispersion(),
                iterations: est.iterations,
                matchings: est.matchings_solved,
                matchings_until_best: est.matchings_until_best,
                step_size: eta,
            })
        })
        .collect()
}
