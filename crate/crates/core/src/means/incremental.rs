//! Incremental means: each presented graph is aligned to the running estimate
//! and the estimate moves a fraction of the way towards it.

use rand::seq::SliceRandom;

use crate::align::{align, distance_matrix, SolverConfig};
use crate::error::{Error, Result};
use crate::frechet::{align_sample, point_cfg, report_from_distances, Loss, Sample};
use crate::graph::AttributedGraph;
use crate::rng::{rng_from, tag};
use crate::scalar::Scalar;

use super::medoid::argmin_row_sum;
use super::{initial, single_loop, Algorithm, MeanConfig, MeanEstimate, OrderPolicy, Tracker};

/// Align sample graph `i` to `current` and step towards it.
fn absorb<T: Scalar>(
    sample: &Sample<T>,
    i: usize,
    current: &AttributedGraph<T>,
    eta: T,
    solver: &SolverConfig,
) -> Result<(AttributedGraph<T>, bool)> {
    let x = &sample.graphs()[i];
    let a = align(x, current, &point_cfg(solver, i))?;
    Ok((current.step_towards(&a.apply(x)?, eta)?, a.exact))
}

fn shuffled(n: usize, seed: u64, tags: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng_from(seed, tags));
    order
}

/// Indices sorted by ascending `key`, ties by index.
fn ascending_by<T: Scalar>(indices: impl Iterator<Item = usize>, key: impl Fn(usize) -> T) -> Vec<usize> {
    let mut v: Vec<usize> = indices.collect();
    v.sort_by(|&a, &b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    v
}

/// Incremental arithmetic mean: one pass with step `1/k` for the `k`-th graph,
/// so the first presented graph becomes the estimate.
pub fn iam<T: Scalar>(sample: &Sample<T>, cfg: &MeanConfig<T>) -> Result<MeanEstimate<T>> {
    cfg.validate()?;
    let n = sample.len();
    let (mut current, mut matchings) = initial(sample, cfg)?;
    let order = match cfg.order_policy {
        OrderPolicy::AsGiven => (0..n).collect(),
        OrderPolicy::Shuffled => shuffled(n, cfg.seed, &[tag("iam-order")]),
        OrderPolicy::IncreasingFromReference => {
            let d = align_sample(sample, &current, &cfg.solver)?.distances;
            matchings += n;
            ascending_by(0..n, |i| d[i])
        }
    };
    let mut exact = true;
    for (k, &i) in order.iter().enumerate() {
        let eta = T::one() / T::from_count(k + 1);
        let (next, e) = absorb(sample, i, &current, eta, &cfg.solver)?;
        current = next;
        exact &= e;
    }
    single_loop(Algorithm::Iam, sample, current, matchings + n, exact, cfg)
}

/// Greedy neighbour joining: start at the medoid and absorb the others in
/// order of increasing distance to it.
pub fn gnj<T: Scalar>(sample: &Sample<T>, cfg: &MeanConfig<T>) -> Result<MeanEstimate<T>> {
    cfg.validate()?;
    let d = distance_matrix(sample.graphs(), &cfg.solver, true)?;
    let (b, _) = argmin_row_sum(&d.rows());
    let order = ascending_by((0..sample.len()).filter(|&j| j != b), |j| d.get(b, j));
    let mut current = sample.graphs()[b].pad(sample.max_order())?;
    let mut exact = cfg.solver.is_exact_for(sample.max_order());
    for (k, &j) in order.iter().enumerate() {
        let eta = T::one() / T::from_count(k + 2);
        let (next, e) = absorb(sample, j, &current, eta, &cfg.solver)?;
        current = next;
        exact &= e;
    }
    single_loop(Algorithm::Gnj, sample, current, d.matchings() + order.len(), exact, cfg)
}

/// Subgradient-style incremental mean with cycles over reshuffled samples.
///
/// Each cycle presents every graph once, moving the estimate `eta` of the way
/// towards its aligned representation, then evaluates `F_n`; the best
/// evaluated estimate is returned.
pub fn sgg<T: Scalar>(sample: &Sample<T>, cfg: &MeanConfig<T>) -> Result<MeanEstimate<T>> {
    cfg.validate()?;
    let schedule = cfg
        .step_size
        .ok_or_else(|| Error::invalid("SGG requires a step size"))?;
    let n = sample.len();
    let (init, init_cost) = initial(sample, cfg)?;
    let first = align_sample(sample, &init, &cfg.solver)?;
    let mut current = first.target;
    let mut exact = first.exact;
    let mut matchings = init_cost + n;
    let mut trace = vec![report_from_distances(first.distances, Loss::MEAN).value];
    let mut tracker = Tracker::new(cfg.improvement_tol);
    tracker.observe(0, &current, trace[0]);
    let mut best_matchings = matchings;
    let mut presented = 0usize;
    let mut cycle = 0usize;
    while trace[trace.len() - 1] != T::zero() && cycle < cfg.max_iterations && !tracker.exhausted(cfg.waiting_time) {
        cycle += 1;
        let order = match cfg.order_policy {
            OrderPolicy::AsGiven => (0..n).collect(),
            _ => shuffled(n, cfg.seed, &[tag("sgg-order"), cycle as u64]),
        };
        for i in order {
            presented += 1;
            let eta = T::lit(schedule.at(presented));
            let (next, e) = absorb(sample, i, &current, eta, &cfg.solver)?;
            current = next;
            exact &= e;
        }
        let eval = align_sample(sample, &current, &cfg.solver)?;
        exact &= eval.exact;
        matchings += 2 * n;
        let v = report_from_distances(eval.distances, Loss::MEAN).value;
        trace.push(v);
        if tracker.observe(cycle, &current, v) {
            best_matchings = matchings;
        }
    }
    let (mean, best, best_iteration) = tracker.into_best();
    Ok(MeanEstimate {
        algorithm: Algorithm::Sgg,
        mean,
        iterations: cycle,
        variation_trace: trace,
        best_variation: best,
        best_iteration,
        matchings_solved: matchings,
        matchings_until_best: best_matchings,
        evaluation_matchings: 0,
        exact,
        step_size: Some(schedule),
    })
}
