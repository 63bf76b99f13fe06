use crate::align::{align, distance_matrix};
use crate::error::Result;
use crate::frechet::Sample;
use crate::graph::{blend, AttributedGraph};
use crate::rng::derive_seed;
use crate::scalar::Scalar;

use super::{single_loop, Algorithm, MeanConfig, MeanEstimate};

struct Cluster<T> {
    members: Vec<usize>,
    rep: AttributedGraph<T>,
}

/// Pairwise agglomerative clustering: repeatedly merge the two clusters at
/// least single-linkage distance, replacing them by the size-weighted blend of
/// their aligned representatives, until one cluster remains.
///
/// Clusters are identified by their smallest member; ties in linkage go to the
/// lexicographically smallest pair of identifiers.
pub fn pac<T: Scalar>(sample: &Sample<T>, cfg: &MeanConfig<T>) -> Result<MeanEstimate<T>> {
    cfg.validate()?;
    let n = sample.len();
    let d = distance_matrix(sample.graphs(), &cfg.solver, false)?;
    let mut clusters: Vec<Option<Cluster<T>>> = sample
        .graphs()
        .iter()
        .enumerate()
        .map(|(i, g)| Some(Cluster { members: vec![i], rep: g.clone() }))
        .collect();
    let mut exact = cfg.solver.is_exact_for(sample.max_order());
    for merge in 0..n.saturating_sub(1) {
        let (a, b) = closest_pair(&clusters, |i, j| d.get(i, j));
        let cb = clusters[b].take().expect("live cluster");
        let ca = clusters[a].take().expect("live cluster");
        // the smaller cluster's representative moves; on equal sizes, `b` moves
        let (big, small) = if cb.members.len() > ca.members.len() { (cb, ca) } else { (ca, cb) };
        let solver = cfg.solver.with_seed(derive_seed(cfg.seed, &[0x9ac, merge as u64]));
        let al = align(&small.rep, &big.rep, &solver)?;
        exact &= al.exact;
        let moved = al.apply(&small.rep)?;
        let anchor = big.rep.pad(moved.order())?;
        let total = T::from_count(big.members.len() + small.members.len());
        let rep = blend(&[
            (&anchor, T::from_count(big.members.len()) / total),
            (&moved, T::from_count(small.members.len()) / total),
        ])?;
        let mut members = big.members;
        members.extend(small.members);
        members.sort_unstable();
        clusters[a] = Some(Cluster { members, rep });
    }
    let root = clusters.into_iter().flatten().next().expect("one cluster remains");
    single_loop(Algorithm::Pac, sample, root.rep, d.matchings() + n - 1, exact, cfg)
}

fn closest_pair<T: Scalar>(clusters: &[Option<Cluster<T>>], dist: impl Fn(usize, usize) -> T) -> (usize, usize) {
    let live: Vec<(usize, &Cluster<T>)> = clusters.iter().enumerate().filter_map(|(i, c)| c.as_ref().map(|c| (i, c))).collect();
    let mut best: Option<(T, usize, usize)> = None;
    for (x, &(a, ca)) in live.iter().enumerate() {
        for &(b, cb) in &live[x + 1..] {
            let link = ca
                .members
                .iter()
                .flat_map(|&i| cb.members.iter().map(move |&j| (i, j)))
                .map(|(i, j)| dist(i, j))
                .fold(T::infinity(), T::min);
            if best.map_or(true, |(l, _, _)| link < l) {
                best = Some((link, a, b));
            }
        }
    }
    let (_, a, b) = best.expect("at least two clusters");
    (a, b)
}
