//! Branch and bound over partial node assignments.
//!
//! Rows (nodes of the first graph) are assigned in index order and targets
//! tried in ascending order, so the search visits permutations
//! lexicographically. A leaf replaces the incumbent only if it is cheaper by
//! more than the tie tolerance, which makes the returned optimum the
//! lexicographically smallest one among (numerical) ties.

use crate::scalar::Scalar;

/// Squared-cost tensor `c[i][j][t][u] = ||x_ij - y_tu||^2` for padded graphs.
pub(crate) struct CostTensor<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> CostTensor<T> {
    pub(crate) fn new(n: usize, d: usize, x: &[T], y: &[T]) -> Self {
        let mut data = Vec::with_capacity(n * n * n * n);
        for ij in 0..n * n {
            let xv = &x[ij * d..(ij + 1) * d];
            for tu in 0..n * n {
                let yv = &y[tu * d..(tu + 1) * d];
                data.push(xv.iter().zip(yv).map(|(&a, &b)| (a - b) * (a - b)).sum());
            }
        }
        Self { n, data }
    }

    #[inline]
    fn get(&self, i: usize, j: usize, t: usize, u: usize) -> T {
        let n = self.n;
        self.data[((i * n + j) * n + t) * n + u]
    }
}

pub(crate) struct SearchResult {
    pub mapping: Vec<usize>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub nodes_visited: u64,
}

struct Search<'a, T> {
    n: usize,
    cost: &'a CostTensor<T>,
    tol: T,
    best_cost: T,
    best: Option<Vec<usize>>,
    mapping: Vec<usize>,
    used: Vec<bool>,
    // acc[depth][r * n + t]: cost of putting row r at t given rows < depth
    acc: Vec<Vec<T>>,
    visited: u64,
}

/// Minimize `sum_ij c[i][j][p(i)][p(j)]` over permutations `p`.
///
/// `upper_bound` must be the cost of some permutation (or infinity); it only
/// tightens pruning and never changes the returned optimum.
pub(crate) fn minimize<T: Scalar>(cost: &CostTensor<T>, upper_bound: T, tol: T) -> SearchResult {
    let n = cost.n;
    let mut root = vec![T::zero(); n * n];
    for r in 0..n {
        for t in 0..n {
            root[r * n + t] = cost.get(r, r, t, t);
        }
    }
    let mut acc = vec![vec![T::zero(); n * n]; n + 1];
    acc[0] = root;
    let mut s = Search {
        n,
        cost,
        tol,
        best_cost: upper_bound + tol + tol,
        best: None,
        mapping: vec![0; n],
        used: vec![false; n],
        acc,
        visited: 0,
    };
    s.descend(0, T::zero());
    SearchResult {
        mapping: s.best.expect("upper bound is attained by some permutation"),
        nodes_visited: s.visited,
    }
}

impl<T: Scalar> Search<'_, T> {
    fn bound(&self, depth: usize) -> T {
        let n = self.n;
        let acc = &self.acc[depth];
        let mut total = T::zero();
        for r in depth..n {
            let mut m = T::infinity();
            for t in 0..n {
                if !self.used[t] && acc[r * n + t] < m {
                    m = acc[r * n + t];
                }
            }
            total = total + m;
        }
        total
    }

    fn descend(&mut self, depth: usize, partial: T) {
        self.visited += 1;
        let n = self.n;
        if depth == n {
            if partial < self.best_cost - self.tol {
                self.best_cost = partial;
                self.best = Some(self.mapping.clone());
            }
            return;
        }
        if partial + self.bound(depth) >= self.best_cost - self.tol {
            return;
        }
        for t in 0..n {
            if self.used[t] {
                continue;
            }
            let step = self.acc[depth][depth * n + t];
            let next = partial + step;
            if next >= self.best_cost - self.tol {
                continue;
            }
            self.used[t] = true;
            self.mapping[depth] = t;
            // fold the new assignment into the per-row costs of deeper rows
            let (head, tail) = self.acc.split_at_mut(depth + 1);
            let cur = &head[depth];
            let nxt = &mut tail[0];
            for r in (depth + 1)..n {
                for u in 0..n {
                    nxt[r * n + u] = if self.used[u] {
                        cur[r * n + u]
                    } else {
                        cur[r * n + u] + self.cost.get(r, depth, u, t) + self.cost.get(depth, r, t, u)
                    };
                }
            }
            self.descend(depth + 1, next);
            self.used[t] = false;
        }
    }
}
