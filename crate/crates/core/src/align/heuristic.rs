//! Multistart local search for large alignments.
//!
//! Each start solves a linear assignment problem on a node-level cost (node
//! attribute distance plus distance between sorted incident-edge profiles),
//! then improves the assignment by pairwise transpositions until no swap
//! lowers the cost.

use rand::Rng;

use crate::rng::rng_from;
use crate::scalar::Scalar;

use super::lap;

/// Padded pair seen from the heuristic: `cost(p) = sum_ij ||x_ij - y_p(i)p(j)||^2`.
pub(crate) struct Problem<'a, T> {
    pub n: usize,
    pub d: usize,
    pub x: &'a [T],
    pub y: &'a [T],
    pub directed: bool,
}

impl<T: Scalar> Problem<'_, T> {
    #[inline]
    fn entry_cost(&self, i: usize, j: usize, t: usize, u: usize) -> T {
        let (n, d) = (self.n, self.d);
        let xv = &self.x[(i * n + j) * d..(i * n + j + 1) * d];
        let yv = &self.y[(t * n + u) * d..(t * n + u + 1) * d];
        xv.iter().zip(yv).map(|(&a, &b)| (a - b) * (a - b)).sum()
    }

    pub fn cost(&self, p: &[usize]) -> T {
        let mut total = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                total = total + self.entry_cost(i, j, p[i], p[j]);
            }
        }
        total
    }

    /// Cost of all entries in rows or columns `a` and `b`.
    fn involved(&self, p: &[usize], a: usize, b: usize) -> T {
        let mut total = T::zero();
        for j in 0..self.n {
            total = total + self.entry_cost(a, j, p[a], p[j]) + self.entry_cost(b, j, p[b], p[j]);
            if j != a && j != b {
                total = total + self.entry_cost(j, a, p[j], p[a]) + self.entry_cost(j, b, p[j], p[b]);
            }
        }
        total
    }

    fn profile(g: &[T], n: usize, d: usize, i: usize, directed: bool) -> Vec<T> {
        let norm = |r: usize, c: usize| -> T {
            g[(r * n + c) * d..(r * n + c + 1) * d]
                .iter()
                .map(|&v| v * v)
                .sum::<T>()
                .sqrt()
        };
        let sorted_desc = |mut v: Vec<T>| {
            v.sort_by(|a, b| b.partial_cmp(a).expect("finite attributes"));
            v
        };
        let mut out = sorted_desc((0..n).filter(|&j| j != i).map(|j| norm(i, j)).collect());
        if directed {
            out.extend(sorted_desc((0..n).filter(|&j| j != i).map(|j| norm(j, i)).collect()));
        }
        out
    }

    /// Node-level assignment cost used to seed the local search.
    pub fn seed_costs(&self) -> Vec<T> {
        let (n, d) = (self.n, self.d);
        let px: Vec<Vec<T>> = (0..n).map(|i| Self::profile(self.x, n, d, i, self.directed)).collect();
        let py: Vec<Vec<T>> = (0..n).map(|i| Self::profile(self.y, n, d, i, self.directed)).collect();
        let mut c = Vec::with_capacity(n * n);
        for i in 0..n {
            for t in 0..n {
                let node = self.entry_cost(i, i, t, t).sqrt();
                let prof: T = px[i]
                    .iter()
                    .zip(&py[t])
                    .map(|(&a, &b)| (a - b) * (a - b))
                    .sum::<T>()
                    .sqrt();
                c.push(node + prof);
            }
        }
        c
    }

    /// First-improvement transposition search from `p`; returns the final cost.
    pub fn local_search(&self, p: &mut [usize], max_sweeps: usize, tol: T) -> T {
        let mut current = self.cost(p);
        for _ in 0..max_sweeps {
            let mut improved = false;
            for a in 0..self.n {
                for b in (a + 1)..self.n {
                    let before = self.involved(p, a, b);
                    p.swap(a, b);
                    let after = self.involved(p, a, b);
                    if after < before - tol {
                        current = current - (before - after);
                        improved = true;
                    } else {
                        p.swap(a, b);
                    }
                }
            }
            if !improved {
                break;
            }
        }
        // re-sum to shed drift from the incremental updates
        let exact = self.cost(p);
        debug_assert!((exact - current).abs() <= T::lit(1e-6) * (T::one() + exact.abs()));
        exact
    }
}

/// Best permutation over the identity start plus `restarts` LAP-seeded starts.
pub(crate) fn search<T: Scalar>(
    prob: &Problem<'_, T>,
    restarts: usize,
    sweeps: usize,
    seed: u64,
    tol: T,
) -> (Vec<usize>, T) {
    let n = prob.n;
    let mut best: Vec<usize> = (0..n).collect();
    let mut best_cost = prob.local_search(&mut best, sweeps, tol);

    let base = prob.seed_costs();
    let mean = base.iter().copied().sum::<T>() / T::from_count(base.len().max(1));
    let spread = if mean > T::zero() { mean } else { T::one() };
    for r in 0..restarts {
        let costs = if r == 0 {
            base.clone()
        } else {
            let mut rng = rng_from(seed, &[r as u64]);
            base.iter()
                .map(|&c| c + spread * T::lit(rng.gen_range(0.0..1.0)))
                .collect()
        };
        let mut p = lap::solve(n, &costs);
        let c = prob.local_search(&mut p, sweeps, tol);
        if c < best_cost - tol {
            best_cost = c;
            best = p;
        }
    }
    (best, best_cost)
}
