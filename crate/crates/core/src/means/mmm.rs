use crate::align::SolverConfig;
use crate::error::Result;
use crate::frechet::{align_sample, report_from_distances, Loss, Sample};
use crate::graph::{average, AttributedGraph};
use crate::scalar::Scalar;

use super::{initial, single_loop, Algorithm, MeanConfig, MeanEstimate, Tracker};

/// One majorize-minimize pass from `current`.
#[derive(Clone, Debug)]
pub struct MmmStep<T> {
    /// `current` padded to the common order.
    pub current: AttributedGraph<T>,
    /// `F_n(current)` under the squared loss.
    pub variation: T,
    /// Average of the sample aligned to `current`.
    pub next: AttributedGraph<T>,
    pub exact: bool,
}

pub fn mmm_step<T: Scalar>(sample: &Sample<T>, current: &AttributedGraph<T>, solver: &SolverConfig) -> Result<MmmStep<T>> {
    let aligned = align_sample(sample, current, solver)?;
    let next = average(&aligned.representations)?;
    Ok(MmmStep {
        variation: report_from_distances(aligned.distances, Loss::MEAN).value,
        current: aligned.target,
        next,
        exact: aligned.exact,
    })
}

/// Majorize-minimize mean: repeat align-then-average until the waiting time
/// runs out, the iteration cap is reached, or the iterate stops moving.
pub fn mmm<T: Scalar>(sample: &Sample<T>, cfg: &MeanConfig<T>) -> Result<MeanEstimate<T>> {
    cfg.validate()?;
    let n = sample.len();
    let (mut current, init_cost) = initial(sample, cfg)?;
    let mut tracker = Tracker::new(cfg.improvement_tol);
    let mut trace = Vec::new();
    let mut exact = true;
    let mut matchings = init_cost;
    let mut best_matchings = init_cost;
    loop {
        let step = mmm_step(sample, &current, &cfg.solver)?;
        matchings += n;
        exact &= step.exact;
        trace.push(step.variation);
        if tracker.observe(trace.len() - 1, &step.current, step.variation) {
            best_matchings = matchings;
        }
        let stalled = step.next == step.current;
        if step.variation == T::zero()
            || stalled
            || tracker.exhausted(cfg.waiting_time)
            || trace.len() >= cfg.max_iterations
        {
            break;
        }
        current = step.next;
    }
    let (mean, best, best_iteration) = tracker.into_best();
    Ok(MeanEstimate {
        algorithm: Algorithm::Mmm,
        mean,
        iterations: trace.len(),
        variation_trace: trace,
        best_variation: best,
        best_iteration,
        matchings_solved: matchings,
        matchings_until_best: best_matchings,
        evaluation_matchings: 0,
        exact,
        step_size: None,
    })
}

/// Batch arithmetic mean: a single majorize-minimize step from the initial graph.
pub fn bam<T: Scalar>(sample: &Sample<T>, cfg: &MeanConfig<T>) -> Result<MeanEstimate<T>> {
    cfg.validate()?;
    let (init, init_cost) = initial(sample, cfg)?;
    let step = mmm_step(sample, &init, &cfg.solver)?;
    single_loop(Algorithm::Bam, sample, step.next, init_cost + sample.len(), step.exact, cfg)
}
