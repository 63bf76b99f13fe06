//! Performance ratios, profiles and pairwise win matrices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::Serialize;

use super::RunRecord;
use crate::error::{Error, Result};
use crate::means::Algorithm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Dispersion,
    Iterations,
}

/// Performance `p[a][s]` of every algorithm on every sample (lower is better).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerformanceTable {
    pub algorithms: Vec<String>,
    pub samples: Vec<String>,
    /// `values[a][s]`.
    pub values: Vec<Vec<f64>>,
}

impl PerformanceTable {
    pub fn new(algorithms: Vec<String>, samples: Vec<String>, values: Vec<Vec<f64>>) -> Result<Self> {
        if algorithms.is_empty() || samples.is_empty() {
            return Err(Error::invalid("performance table needs algorithms and samples"));
        }
        if values.len() != algorithms.len() || values.iter().any(|r| r.len() != samples.len()) {
            return Err(Error::invalid("performance table shape mismatch"));
        }
        if values.iter().flatten().any(|&v| !(v >= 0.0)) {
            return Err(Error::invalid("performances must be nonnegative"));
        }
        Ok(Self { algorithms, samples, values })
    }

    /// Table from records; samples are keyed by `(dataset, sample_id)` and
    /// every algorithm must appear on every sample exactly once.
    pub fn from_records(records: &[RunRecord], metric: Metric) -> Result<Self> {
        let algs: Vec<Algorithm> = records.iter().map(|r| r.algorithm).collect::<BTreeSet<_>>().into_iter().collect();
        let mut samples: Vec<(String, String)> = Vec::new();
        let mut cells: BTreeMap<(usize, (String, String)), f64> = BTreeMap::new();
        for r in records {
            let key = (r.dataset.clone(), r.sample_id.clone());
            if !samples.contains(&key) {
                samples.push(key.clone());
            }
            let a = algs.binary_search(&r.algorithm).expect("collected above");
            if cells.insert((a, key), r.performance(metric)).is_some() {
                return Err(Error::invalid(format!("duplicate record for {} on {}/{}", r.algorithm, r.dataset, r.sample_id)));
            }
        }
        let values = (0..algs.len())
            .map(|a| {
                samples
                    .iter()
                    .map(|s| {
                        cells
                            .get(&(a, s.clone()))
                            .copied()
                            .ok_or_else(|| Error::invalid(format!("{} missing on {}/{}", algs[a], s.0, s.1)))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let names = samples.into_iter().map(|(d, s)| format!("{d}/{s}")).collect();
        Self::new(algs.iter().map(|a| a.to_string()).collect(), names, values)
    }

    fn column(&self, s: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[s]).collect()
    }
}

/// `r_a = p_a / min_b p_b` for one sample. When the best performance is 0,
/// algorithms at 0 get ratio 1 and all others `+inf`.
pub fn performance_ratio(performances: &[f64]) -> Vec<f64> {
    let best = performances.iter().copied().fold(f64::INFINITY, f64::min);
    performances
        .iter()
        .map(|&p| match (best == 0.0, p == 0.0) {
            (true, true) => 1.0,
            (true, false) => f64::INFINITY,
            _ => p / best,
        })
        .collect()
}

/// Empirical distribution of one algorithm's performance ratios.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerformanceProfile {
    pub algorithm: String,
    /// Ratios over all samples, ascending (infinite ratios last).
    pub ratios: Vec<f64>,
    /// Worst finite ratio (1 if none).
    pub tau_max: f64,
    /// `P(1)`: fraction of samples on which the algorithm is (jointly) best.
    pub wins: f64,
}

impl PerformanceProfile {
    /// `P(tau)`: fraction of samples with ratio at most `tau`.
    pub fn at(&self, tau: f64) -> f64 {
        let k = self.ratios.partition_point(|&r| r <= tau);
        k as f64 / self.ratios.len() as f64
    }

    /// Jump points `(tau, P(tau))` of the right-continuous step function.
    pub fn breakpoints(&self) -> Vec<(f64, f64)> {
        let n = self.ratios.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (k, &r) in self.ratios.iter().enumerate() {
            if !r.is_finite() {
                break;
            }
            let p = (k + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == r => last.1 = p,
                _ => out.push((r, p)),
            }
        }
        out
    }
}

pub fn performance_profiles(table: &PerformanceTable) -> Vec<PerformanceProfile> {
    let mut ratios = vec![Vec::with_capacity(table.samples.len()); table.algorithms.len()];
    for s in 0..table.samples.len() {
        for (a, r) in performance_ratio(&table.column(s)).into_iter().enumerate() {
            ratios[a].push(r);
        }
    }
    table
        .algorithms
        .iter()
        .zip(ratios)
        .map(|(name, mut r)| {
            r.sort_by(f64::total_cmp);
            let tau_max = r.iter().copied().filter(|x| x.is_finite()).fold(1.0, f64::max);
            let wins = r.iter().filter(|&&x| x == 1.0).count() as f64 / r.len() as f64;
            PerformanceProfile { algorithm: name.clone(), ratios: r, tau_max, wins }
        })
        .collect()
}

/// Breakpoints of all profiles: `algorithm,tau,probability`.
pub fn profiles_csv(profiles: &[PerformanceProfile]) -> String {
    let mut s = String::from("algorithm,tau,probability\n");
    for p in profiles {
        for (tau, prob) in p.breakpoints() {
            writeln!(s, "{},{},{}", p.algorithm, tau, prob).expect("write to string");
        }
    }
    s
}

/// Head-to-head comparison: how often algorithm `i` is strictly better than `j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairwiseComparison {
    pub algorithms: Vec<String>,
    pub samples: usize,
    /// `better[i][j]`: samples where `i` is strictly better than `j`.
    pub better: Vec<Vec<usize>>,
    /// `percent[i][j] = 100 * better[i][j] / samples`.
    pub percent: Vec<Vec<f64>>,
    /// Competitions won: `j` with `better[i][j] > better[j][i]`.
    pub wins: Vec<usize>,
    /// Percentage of all pairwise comparisons won.
    pub total: Vec<f64>,
}

impl PairwiseComparison {
    pub fn ties(&self, i: usize, j: usize) -> usize {
        if i == j {
            return self.samples;
        }
        self.samples - self.better[i][j] - self.better[j][i]
    }

    /// Matrix CSV: one row per algorithm, then its wins and total percentage.
    pub fn to_csv(&self) -> String {
        let mut s = format!("algorithm,{},wins,total\n", self.algorithms.join(","));
        for (i, a) in self.algorithms.iter().enumerate() {
            let cells: Vec<String> = self.percent[i].iter().map(f64::to_string).collect();
            writeln!(s, "{a},{},{},{}", cells.join(","), self.wins[i], self.total[i]).expect("write to string");
        }
        s
    }
}

pub fn pairwise_comparison(table: &PerformanceTable) -> PairwiseComparison {
    let k = table.algorithms.len();
    let n = table.samples.len();
    let mut better = vec![vec![0usize; k]; k];
    for s in 0..n {
        for i in 0..k {
            for j in 0..k {
                if table.values[i][s] < table.values[j][s] {
                    better[i][j] += 1;
                }
            }
        }
    }
    let pct = |c: usize| 100.0 * c as f64 / n as f64;
    let percent = better.iter().map(|row| row.iter().map(|&c| pct(c)).collect()).collect();
    let wins = (0..k).map(|i| (0..k).filter(|&j| better[i][j] > better[j][i]).count()).collect();
    let total = (0..k)
        .map(|i| {
            let won: usize = better[i].iter().sum();
            let games = n * (k - 1);
            if games == 0 {
                0.0
            } else {
                100.0 * won as f64 / games as f64
            }
        })
        .collect();
    PairwiseComparison {
        algorithms: table.algorithms.clone(),
        samples: n,
        better,
        percent,
        wins,
        total,
    }
}
