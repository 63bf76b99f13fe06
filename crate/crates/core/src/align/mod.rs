//! Optimal alignment, the graph edit kernel and its metric.
//!
//! Two graphs are compared by padding both to the larger order and searching
//! the node permutation of the first that minimizes the Frobenius distance to
//! the second. The minimum is the graph edit kernel metric `delta`; the kernel
//! itself is recovered from the identity
//! `delta^2 = kappa(x, x) + kappa(y, y) - 2 kappa(x, y)`.
//!
//! Padded orders up to [`SolverConfig::exact_threshold`] are solved exactly by
//! branch and bound; larger ones by a multistart local search whose cost is an
//! upper bound on `delta`.

mod exact;
mod heuristic;
pub mod lap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{frobenius_distance, AttributedGraph, NodePermutation};
use crate::rng::derive_seed;
use crate::scalar::Scalar;

/// Largest padded order `align_exact` accepts.
pub const EXACT_SAFETY_CAP: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Largest padded order solved exactly.
    pub exact_threshold: usize,
    /// Number of LAP-seeded starts of the heuristic.
    pub restarts: usize,
    /// Maximum transposition sweeps per start.
    pub local_search_sweeps: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            exact_threshold: 8,
            restarts: 16,
            local_search_sweeps: 100,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.exact_threshold < 1 {
            return Err(Error::invalid("exact_threshold must be at least 1"));
        }
        if self.restarts < 1 {
            return Err(Error::invalid("restarts must be at least 1"));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    /// Whether pairs padded to `order` are solved exactly.
    pub fn is_exact_for(&self, order: usize) -> bool {
        order <= 1 || order <= self.exact_threshold.min(EXACT_SAFETY_CAP)
    }
}

/// A node permutation of the first graph's padded representation.
#[derive(Clone, Debug, PartialEq)]
pub struct Alignment<T> {
    pub perm: NodePermutation,
    /// Achieved `||perm(pad(x)) - pad(y)||`.
    pub cost: T,
    pub exact: bool,
}

impl<T: Scalar> Alignment<T> {
    /// Padded order of the aligned pair.
    pub fn order(&self) -> usize {
        self.perm.len()
    }

    /// The representation of `x` this alignment produces.
    pub fn apply(&self, x: &AttributedGraph<T>) -> Result<AttributedGraph<T>> {
        x.pad(self.order())?.permute(&self.perm)
    }
}

fn check_dims<T: Scalar>(x: &AttributedGraph<T>, y: &AttributedGraph<T>) -> Result<()> {
    if x.attr_dim() != y.attr_dim() {
        return Err(Error::invalid(format!(
            "attribute dimensions differ: {} vs {}",
            x.attr_dim(),
            y.attr_dim()
        )));
    }
    Ok(())
}

fn padded_pair<T: Scalar>(
    x: &AttributedGraph<T>,
    y: &AttributedGraph<T>,
) -> Result<(AttributedGraph<T>, AttributedGraph<T>)> {
    check_dims(x, y)?;
    let n = x.order().max(y.order());
    Ok((x.pad(n)?, y.pad(n)?))
}

fn tie_tolerance<T: Scalar>(xp: &AttributedGraph<T>, yp: &AttributedGraph<T>) -> T {
    let scale = xp.norm_squared() + yp.norm_squared() + T::min_positive_value();
    scale * T::lit(1e-12).max(T::epsilon() * T::lit(64.0))
}

fn finish<T: Scalar>(
    xp: &AttributedGraph<T>,
    yp: &AttributedGraph<T>,
    mapping: Vec<usize>,
    exact: bool,
) -> Result<Alignment<T>> {
    let perm = NodePermutation::new(mapping)?;
    let cost = frobenius_distance(&xp.permute(&perm)?, yp)?;
    Ok(Alignment { perm, cost, exact })
}

/// Align `x` towards `y`, exactly when the padded order allows it.
pub fn align<T: Scalar>(
    x: &AttributedGraph<T>,
    y: &AttributedGraph<T>,
    cfg: &SolverConfig,
) -> Result<Alignment<T>> {
    check_dims(x, y)?;
    let n = x.order().max(y.order());
    if cfg.is_exact_for(n) {
        align_exact_with_cap(x, y, EXACT_SAFETY_CAP)
    } else {
        align_heuristic(x, y, cfg)
    }
}

/// Globally optimal alignment; padded orders above [`EXACT_SAFETY_CAP`] are refused.
pub fn align_exact<T: Scalar>(x: &AttributedGraph<T>, y: &AttributedGraph<T>) -> Result<Alignment<T>> {
    align_exact_with_cap(x, y, EXACT_SAFETY_CAP)
}

pub fn align_exact_with_cap<T: Scalar>(
    x: &AttributedGraph<T>,
    y: &AttributedGraph<T>,
    cap: usize,
) -> Result<Alignment<T>> {
    let (xp, yp) = padded_pair(x, y)?;
    let n = xp.order();
    if n > cap {
        return Err(Error::UnsupportedSize { order: n, cap });
    }
    if n == 1 {
        return finish(&xp, &yp, vec![0], true);
    }
    let tol = tie_tolerance(&xp, &yp);
    let prob = heuristic::Problem {
        n,
        d: xp.attr_dim(),
        x: xp.as_slice(),
        y: yp.as_slice(),
        directed: xp.is_directed() || yp.is_directed(),
    };
    // a cheap incumbent to prune against
    let (_, upper) = heuristic::search(&prob, 1, 20, 0, tol);
    let tensor = exact::CostTensor::new(n, xp.attr_dim(), xp.as_slice(), yp.as_slice());
    let found = exact::minimize(&tensor, upper, tol);
    finish(&xp, &yp, found.mapping, true)
}

/// Multistart LAP + transposition local search; `cost` is an upper bound on `delta`.
pub fn align_heuristic<T: Scalar>(
    x: &AttributedGraph<T>,
    y: &AttributedGraph<T>,
    cfg: &SolverConfig,
) -> Result<Alignment<T>> {
    cfg.validate()?;
    let (xp, yp) = padded_pair(x, y)?;
    let n = xp.order();
    let prob = heuristic::Problem {
        n,
        d: xp.attr_dim(),
        x: xp.as_slice(),
        y: yp.as_slice(),
        directed: xp.is_directed() || yp.is_directed(),
    };
    let tol = tie_tolerance(&xp, &yp);
    let (mapping, _) = heuristic::search(&prob, cfg.restarts, cfg.local_search_sweeps, cfg.seed, tol);
    finish(&xp, &yp, mapping, n <= 1)
}

/// Graph edit kernel `max <X, Y>` over alignments, via the achieved alignment.
pub fn kernel<T: Scalar>(x: &AttributedGraph<T>, y: &AttributedGraph<T>, cfg: &SolverConfig) -> Result<T> {
    let a = align(x, y, cfg)?;
    Ok((x.norm_squared() + y.norm_squared() - a.cost * a.cost) / T::lit(2.0))
}

/// Graph edit kernel metric `delta(x, y)`.
pub fn distance<T: Scalar>(x: &AttributedGraph<T>, y: &AttributedGraph<T>, cfg: &SolverConfig) -> Result<T> {
    Ok(align(x, y, cfg)?.cost)
}

/// Symmetric matrix of pairwise (squared) distances.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix<T> {
    n: usize,
    values: Vec<T>,
}

impl<T: Scalar> DistanceMatrix<T> {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Number of alignments needed to fill the matrix.
    pub fn matchings(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }
}

/// Pairwise distances over a list of graphs. Entry `(i, j)` with `i < j` is
/// computed once, with solver seed derived from `(cfg.seed, i, j)`.
pub fn distance_matrix<T: Scalar>(
    graphs: &[AttributedGraph<T>],
    cfg: &SolverConfig,
    squared: bool,
) -> Result<DistanceMatrix<T>> {
    let n = graphs.len();
    if n == 0 {
        return Err(Error::invalid("distance matrix of an empty sample"));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let costs: Vec<T> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let pair_cfg = cfg.with_seed(derive_seed(cfg.seed, &[i as u64, j as u64]));
            align(&graphs[i], &graphs[j], &pair_cfg).map(|a| a.cost)
        })
        .collect::<Result<_>>()?;
    let mut values = vec![T::zero(); n * n];
    for (&(i, j), &c) in pairs.iter().zip(&costs) {
        let v = if squared { c * c } else { c };
        values[i * n + j] = v;
        values[j * n + i] = v;
    }
    Ok(DistanceMatrix { n, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::inner;
    use rand::{Rng, SeedableRng};

    type G = AttributedGraph<f64>;

    fn random_graph(rng: &mut impl Rng, order: usize, dim: usize, density: f64) -> G {
        let mut g = G::zeros(order, dim, false);
        for i in 0..order {
            let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            g.set_node(i, &v).unwrap();
            for j in (i + 1)..order {
                if rng.gen_bool(density) {
                    let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    g.set_edge(i, j, &v).unwrap();
                }
            }
        }
        g
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
            if prefix.len() == n {
                out.push(prefix.clone());
                return;
            }
            for t in 0..n {
                if !prefix.contains(&t) {
                    prefix.push(t);
                    rec(prefix, n, out);
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), n, &mut out);
        out
    }

    /// Brute-force oracle: (min distance, max inner product) over all permutations.
    fn enumerate(x: &G, y: &G) -> (f64, f64) {
        let n = x.order().max(y.order());
        let (xp, yp) = (x.pad(n).unwrap(), y.pad(n).unwrap());
        let mut best = (f64::INFINITY, f64::NEG_INFINITY);
        for m in permutations(n) {
            let r = xp.permute(&NodePermutation::new(m).unwrap()).unwrap();
            best.0 = best.0.min(frobenius_distance(&r, &yp).unwrap());
            best.1 = best.1.max(inner(&r, &yp).unwrap());
        }
        best
    }

    #[test]
    fn self_alignment_is_free() {
        let mut rng = rand_xoshiro::SplitMix64::seed_from_u64(1);
        let g = random_graph(&mut rng, 5, 2, 0.5);
        let a = align(&g, &g, &SolverConfig::default()).unwrap();
        assert_eq!(a.cost, 0.0);
        assert!(a.exact);
        assert!(a.perm.is_identity());
        let h = align_heuristic(&g, &g, &SolverConfig::default()).unwrap();
        assert_eq!(h.cost, 0.0);
        assert!(!h.exact);
    }

    #[test]
    fn swapped_node_attributes_align_at_zero_cost() {
        let a = G::from_nodes(&[vec![1.0], vec![2.0]]).unwrap();
        let b = G::from_nodes(&[vec![2.0], vec![1.0]]).unwrap();
        let al = align(&a, &b, &SolverConfig::default()).unwrap();
        assert_eq!(al.perm.as_slice(), &[1, 0]);
        assert_eq!(al.cost, 0.0);
    }

    #[test]
    fn two_node_path_against_three_node_graph() {
        // X: nodes 1 - 2 joined by an edge of weight 1 (padded to order 3).
        // Y: triangle-free path with node attributes 1, 2, 1 and edge weights 1, 1.
        let x = G::from_scalar_matrix(&[vec![1.0, 1.0], vec![1.0, 2.0]], false).unwrap();
        let y = G::from_scalar_matrix(
            &[vec![1.0, 1.0, 0.0], vec![1.0, 2.0, 1.0], vec![0.0, 1.0, 1.0]],
            false,
        )
        .unwrap();
        let (oracle, _) = enumerate(&x, &y);
        // unmatched third node (1) and edge (1) counted twice: 1 + 1 + 1
        assert!((oracle - 3f64.sqrt()).abs() < 1e-12);
        let a = align(&x, &y, &SolverConfig::default()).unwrap();
        assert!((a.cost - oracle).abs() < 1e-12);
        // a pair whose optimum is sqrt(7): y extends x by a node of attribute -sqrt(7)
        let y7 = G::from_scalar_matrix(
            &[vec![1.0, 1.0, 0.0], vec![1.0, 2.0, 0.0], vec![0.0, 0.0, -(7f64.sqrt())]],
            false,
        )
        .unwrap();
        let (oracle7, _) = enumerate(&x, &y7);
        assert!((oracle7 - 7f64.sqrt()).abs() < 1e-12);
        let a7 = align(&x, &y7, &SolverConfig::default()).unwrap();
        assert!((a7.cost - 7f64.sqrt()).abs() < 1e-12);
        assert_eq!(a7.order(), 3);
        let rep = a7.apply(&x).unwrap();
        assert!((frobenius_distance(&rep, &y7).unwrap() - a7.cost).abs() == 0.0);
    }

    #[test]
    fn exact_matches_enumeration() {
        let mut rng = rand_xoshiro::SplitMix64::seed_from_u64(5);
        for _ in 0..30 {
            let (ox, oy) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
            let x = random_graph(&mut rng, ox, 2, 0.5);
            let y = random_graph(&mut rng, oy, 2, 0.5);
            let (oracle, kappa) = enumerate(&x, &y);
            let a = align_exact(&x, &y).unwrap();
            assert!((a.cost - oracle).abs() < 1e-9, "{} vs {}", a.cost, oracle);
            let k = kernel(&x, &y, &SolverConfig::default()).unwrap();
            assert!((k - kappa).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_order_two_picks_cheaper_and_lexicographic_ties() {
        let x = G::from_nodes(&[vec![1.0], vec![5.0]]).unwrap();
        let y = G::from_nodes(&[vec![5.0], vec![1.2]]).unwrap();
        assert_eq!(align_exact(&x, &y).unwrap().perm.as_slice(), &[1, 0]);
        // all permutations tie; smallest one wins
        let z = G::zeros(3, 1, false);
        assert!(align_exact(&z, &z).unwrap().perm.is_identity());
    }

    #[test]
    fn exact_refuses_large_orders() {
        let g = G::zeros(11, 1, false);
        assert!(matches!(
            align_exact(&g, &g),
            Err(Error::UnsupportedSize { order: 11, cap: 10 })
        ));
        assert!(align_exact_with_cap(&G::zeros(4, 1, false), &g.pad(11).unwrap(), 3).is_err());
    }

    #[test]
    fn permuted_copy_has_zero_distance() {
        let mut rng = rand_xoshiro::SplitMix64::seed_from_u64(9);
        let y = random_graph(&mut rng, 6, 1, 0.6);
        let p = NodePermutation::new(vec![3, 0, 5, 1, 4, 2]).unwrap();
        let x = y.permute(&p).unwrap();
        assert_eq!(align_exact(&x, &y).unwrap().cost, 0.0);
    }

    #[test]
    fn heuristic_dominated_by_exact() {
        let mut rng = rand_xoshiro::SplitMix64::seed_from_u64(21);
        let cfg = SolverConfig::default();
        for _ in 0..30 {
            let x = random_graph(&mut rng, 6, 2, 0.5);
            let y = random_graph(&mut rng, 6, 2, 0.5);
            let e = align_exact(&x, &y).unwrap();
            let h = align_heuristic(&x, &y, &cfg).unwrap();
            assert!(h.cost >= e.cost - 1e-12);
            let one = align_heuristic(&x, &y, &SolverConfig { restarts: 1, ..cfg.clone() }).unwrap();
            assert!(h.cost <= one.cost);
        }
    }

    #[test]
    fn heuristic_regime_above_threshold() {
        let mut rng = rand_xoshiro::SplitMix64::seed_from_u64(4);
        let cfg = SolverConfig {
            exact_threshold: 4,
            ..Default::default()
        };
        let x = random_graph(&mut rng, 12, 2, 0.3);
        let y = random_graph(&mut rng, 9, 2, 0.3);
        let a = align(&x, &y, &cfg).unwrap();
        assert!(!a.exact);
        assert_eq!(a.order(), 12);
        assert_eq!(align(&x, &y, &cfg).unwrap(), a);
    }

    #[test]
    fn distance_examples() {
        let cfg = SolverConfig::default();
        let a = G::from_nodes(&[vec![3.0]]).unwrap();
        let b = G::from_nodes(&[vec![4.0]]).unwrap();
        assert_eq!(distance(&a, &b, &cfg).unwrap(), 1.0);
        assert_eq!(kernel(&a, &a, &cfg).unwrap(), 9.0);
        assert_eq!(kernel(&a, &G::zeros(1, 1, false), &cfg).unwrap(), 0.0);
        assert!(distance(&a, &G::zeros(1, 2, false), &cfg).is_err());
    }

    #[test]
    fn distance_matrix_cases() {
        let cfg = SolverConfig::default();
        let g = G::from_nodes(&[vec![1.0], vec![2.0]]).unwrap();
        let one = distance_matrix(&[g.clone()], &cfg, false).unwrap();
        assert_eq!(one.rows(), vec![vec![0.0]]);
        let two = distance_matrix(&[g.clone(), g.clone()], &cfg, true).unwrap();
        assert_eq!(two.rows(), vec![vec![0.0; 2]; 2]);

        let mut rng = rand_xoshiro::SplitMix64::seed_from_u64(8);
        let gs: Vec<G> = (0..5).map(|_| random_graph(&mut rng, 4, 1, 0.5)).collect();
        let dm = distance_matrix(&gs, &cfg, false).unwrap();
        let sq = distance_matrix(&gs, &cfg, true).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let oracle = if i == j { 0.0 } else { enumerate(&gs[i], &gs[j]).0 };
                assert!((dm.get(i, j) - oracle).abs() < 1e-9);
                assert_eq!(dm.get(i, j), dm.get(j, i));
                assert!((sq.get(i, j) - oracle * oracle).abs() < 1e-9);
            }
        }
        assert_eq!(dm.matchings(), 10);
    }

    #[test]
    fn f32_alignment() {
        let a = AttributedGraph::<f32>::from_nodes(&[vec![1.0], vec![2.0]]).unwrap();
        let b = AttributedGraph::<f32>::from_nodes(&[vec![2.0], vec![1.5]]).unwrap();
        let al = align(&a, &b, &SolverConfig::default()).unwrap();
        assert!((al.cost - 0.5).abs() < 1e-6);
    }
}
