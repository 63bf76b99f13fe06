//! Sample-mean algorithms behind one contract: a [`Sample`] and a
//! [`MeanConfig`] in, a [`MeanEstimate`] out.
//!
//! Work is counted in solved graph matching problems (one pairwise alignment
//! each). `matchings_solved` is the algorithm's own work: for MMM each pass
//! aligns all `n` graphs and thereby also evaluates `F_n` at the current
//! iterate, so `T` passes cost exactly `T * n`. Single-loop algorithms and MED
//! count only their fusion and distance-matrix work (`n`, `n`,
//! `n(n-1)/2 + n - 1`, `n(n-1)/2 + n - 1`, `n(n-1)/2` for BAM, IAM, GNJ, PAC
//! and MED); evaluating `F_n` at their result is reported separately in
//! `evaluation_matchings`. SGG evaluates its start and every cycle on top of
//! the `n` updates per cycle, giving `n + 2 n T`.

mod incremental;
mod medoid;
mod mmm;
mod pac;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::align::SolverConfig;
use crate::error::{Error, Result};
use crate::frechet::{align_sample, report_from_distances, Loss, Sample};
use crate::graph::AttributedGraph;
use crate::rng::{rng_from, tag};
use crate::scalar::Scalar;

pub use incremental::{gnj, iam, sgg};
pub use medoid::{med, medoid_index};
pub use mmm::{bam, mmm, mmm_step, MmmStep};
pub use pac::pac;

/// Step sizes tried for SGG when tuning by grid search.
pub const SGG_STEP_GRID: [f64; 9] = [0.9, 0.3, 0.1, 0.07, 0.03, 0.01, 0.007, 0.003, 0.001];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Algorithm {
    Mmm,
    Sgg,
    Bam,
    Iam,
    Gnj,
    Pac,
    Med,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Mmm,
        Algorithm::Sgg,
        Algorithm::Bam,
        Algorithm::Iam,
        Algorithm::Gnj,
        Algorithm::Pac,
        Algorithm::Med,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Mmm => "MMM",
            Algorithm::Sgg => "SGG",
            Algorithm::Bam => "BAM",
            Algorithm::Iam => "IAM",
            Algorithm::Gnj => "GNJ",
            Algorithm::Pac => "PAC",
            Algorithm::Med => "MED",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::invalid(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepSize {
    Constant(f64),
    /// `1 / k` for the `k`-th presented graph.
    Harmonic,
}

impl StepSize {
    fn at(self, k: usize) -> f64 {
        match self {
            StepSize::Constant(eta) => eta,
            StepSize::Harmonic => 1.0 / k as f64,
        }
    }

    pub fn constant(self) -> Option<f64> {
        match self {
            StepSize::Constant(eta) => Some(eta),
            StepSize::Harmonic => None,
        }
    }
}

/// Presentation order for the incremental algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderPolicy {
    AsGiven,
    Shuffled,
    /// Ascending distance from the initial graph (ties by index).
    IncreasingFromReference,
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitPolicy<T> {
    /// A sample graph chosen by the configuration seed.
    RandomSampleGraph,
    Given(AttributedGraph<T>),
    Medoid,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeanConfig<T> {
    pub solver: SolverConfig,
    pub seed: u64,
    /// Passes without improvement before stopping.
    pub waiting_time: usize,
    pub max_iterations: usize,
    /// Relative decrease of the best variation that counts as improvement.
    pub improvement_tol: f64,
    /// Required by SGG only.
    pub step_size: Option<StepSize>,
    pub order_policy: OrderPolicy,
    pub init_policy: InitPolicy<T>,
}

impl<T> Default for MeanConfig<T> {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default(),
            seed: 0,
            waiting_time: 10,
            max_iterations: 500,
            improvement_tol: 1e-9,
            step_size: None,
            order_policy: OrderPolicy::Shuffled,
            init_policy: InitPolicy::RandomSampleGraph,
        }
    }
}

impl<T: Scalar> MeanConfig<T> {
    pub fn validate(&self) -> Result<()> {
        self.solver.validate()?;
        if self.waiting_time < 1 {
            return Err(Error::invalid("waiting_time must be at least 1"));
        }
        if self.max_iterations < 1 {
            return Err(Error::invalid("max_iterations must be at least 1"));
        }
        if let Some(StepSize::Constant(eta)) = self.step_size {
            if !(eta > 0.0) || !eta.is_finite() {
                return Err(Error::invalid(format!("step size must be positive, got {eta}")));
            }
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeanEstimate<T> {
    pub algorithm: Algorithm,
    #[serde(skip)]
    pub mean: AttributedGraph<T>,
    /// `F_n` after each pass (single-loop algorithms: one entry).
    pub variation_trace: Vec<T>,
    pub best_variation: T,
    /// Passes through the sample (cycles for SGG).
    pub iterations: usize,
    /// Pass that produced the reported mean.
    pub best_iteration: usize,
    pub matchings_solved: usize,
    pub matchings_until_best: usize,
    pub evaluation_matchings: usize,
    /// Every alignment used was solved exactly.
    pub exact: bool,
    pub step_size: Option<StepSize>,
}

impl<T: Scalar> MeanEstimate<T> {
    pub fn dispersion(&self) -> T {
        self.best_variation.sqrt()
    }

    pub fn total_matchings(&self) -> usize {
        self.matchings_solved + self.evaluation_matchings
    }
}

/// Dispatch to the named algorithm.
pub fn run<T: Scalar>(algorithm: Algorithm, sample: &Sample<T>, cfg: &MeanConfig<T>) -> Result<MeanEstimate<T>> {
    match algorithm {
        Algorithm::Mmm => mmm(sample, cfg),
        Algorithm::Sgg => sgg(sample, cfg),
        Algorithm::Bam => bam(sample, cfg),
        Algorithm::Iam => iam(sample, cfg),
        Algorithm::Gnj => gnj(sample, cfg),
        Algorithm::Pac => pac(sample, cfg),
        Algorithm::Med => med(sample, cfg),
    }
}

/// Dispatch by name.
pub fn run_named<T: Scalar>(name: &str, sample: &Sample<T>, cfg: &MeanConfig<T>) -> Result<MeanEstimate<T>> {
    run(name.parse()?, sample, cfg)
}

/// Initial graph per policy, padded to the sample's order, and the matchings spent.
fn initial<T: Scalar>(sample: &Sample<T>, cfg: &MeanConfig<T>) -> Result<(AttributedGraph<T>, usize)> {
    let n = sample.max_order();
    let (g, spent) = match &cfg.init_policy {
        InitPolicy::RandomSampleGraph => {
            let idx = rng_from(cfg.seed, &[tag("init")]).gen_range(0..sample.len());
            (sample.graphs()[idx].clone(), 0)
        }
        InitPolicy::Given(g) => {
            if g.attr_dim() != sample.attr_dim() {
                return Err(Error::invalid("initial graph and sample attribute dimensions differ"));
            }
            (g.clone(), 0)
        }
        InitPolicy::Medoid => {
            let (idx, _, spent) = medoid_index(sample, &cfg.solver)?;
            (sample.graphs()[idx].clone(), spent)
        }
    };
    let order = n.max(g.order());
    Ok((g.pad(order)?, spent))
}

/// Estimate for an algorithm that stops after one loop: evaluates `F_n` at `mean`.
fn single_loop<T: Scalar>(
    algorithm: Algorithm,
    sample: &Sample<T>,
    mean: AttributedGraph<T>,
    matchings: usize,
    exact: bool,
    cfg: &MeanConfig<T>,
) -> Result<MeanEstimate<T>> {
    let eval = align_sample(sample, &mean, &cfg.solver)?;
    let v = report_from_distances(eval.distances, Loss::MEAN).value;
    Ok(MeanEstimate {
        algorithm,
        mean: eval.target,
        variation_trace: vec![v],
        best_variation: v,
        iterations: 1,
        best_iteration: 0,
        matchings_solved: matchings,
        matchings_until_best: matchings,
        evaluation_matchings: sample.len(),
        exact: exact && eval.exact,
        step_size: None,
    })
}

/// Best-so-far bookkeeping with the waiting-time stopping rule.
struct Tracker<T> {
    best: Option<(AttributedGraph<T>, T)>,
    best_iteration: usize,
    since_improvement: usize,
    tol: T,
}

impl<T: Scalar> Tracker<T> {
    fn new(tol: f64) -> Self {
        Self {
            best: None,
            best_iteration: 0,
            since_improvement: 0,
            tol: T::lit(tol),
        }
    }

    /// Record the value at `iteration`; returns whether it is a new best.
    /// Only a decrease beyond the relative tolerance resets the waiting time.
    fn observe(&mut self, iteration: usize, candidate: &AttributedGraph<T>, value: T) -> bool {
        let (better, significant) = match &self.best {
            None => (true, true),
            Some((_, best)) => (value < *best, value < *best - self.tol * best.abs()),
        };
        if significant {
            self.since_improvement = 0;
        } else {
            self.since_improvement += 1;
        }
        if better {
            self.best = Some((candidate.clone(), value));
            self.best_iteration = iteration;
        }
        better
    }

    fn exhausted(&self, waiting_time: usize) -> bool {
        self.since_improvement >= waiting_time
    }

    fn into_best(self) -> (AttributedGraph<T>, T, usize) {
        let (g, v) = self.best.expect("at least one observation");
        (g, v, self.best_iteration)
    }
}
