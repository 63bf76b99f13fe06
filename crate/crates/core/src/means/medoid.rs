use crate::align::{distance_matrix, SolverConfig};
use crate::error::Result;
use crate::frechet::Sample;
use crate::scalar::{compensated_sum, Scalar};

use super::{Algorithm, MeanConfig, MeanEstimate};

/// Index minimising the sum of squared distances to the sample (ties: lowest
/// index), that sum, and the matchings spent.
pub fn medoid_index<T: Scalar>(sample: &Sample<T>, solver: &SolverConfig) -> Result<(usize, T, usize)> {
    let d = distance_matrix(sample.graphs(), solver, true)?;
    let (idx, sum) = argmin_row_sum(&d.rows());
    Ok((idx, sum, d.matchings()))
}

pub(super) fn argmin_row_sum<T: Scalar>(rows: &[Vec<T>]) -> (usize, T) {
    let mut best = (0, T::infinity());
    for (i, row) in rows.iter().enumerate() {
        let s = compensated_sum(row.iter().copied());
        if s < best.1 {
            best = (i, s);
        }
    }
    best
}

/// Sample medoid: the sample graph of least squared-distance sum.
pub fn med<T: Scalar>(sample: &Sample<T>, cfg: &MeanConfig<T>) -> Result<MeanEstimate<T>> {
    cfg.validate()?;
    let (idx, sum, spent) = medoid_index(sample, &cfg.solver)?;
    Ok(MeanEstimate {
        algorithm: Algorithm::Med,
        mean: sample.graphs()[idx].clone(),
        variation_trace: vec![sum],
        best_variation: sum,
        iterations: 1,
        best_iteration: 0,
        matchings_solved: spent,
        matchings_until_best: spent,
        evaluation_matchings: 0,
        exact: cfg.solver.is_exact_for(sample.max_order()),
        step_size: None,
    })
}
