//! Automorphisms and the degree of asymmetry.
//!
//! Both searches enumerate node permutations depth first, assigning node `0`
//! first and trying images in ascending order, so witnesses are the
//! lexicographically smallest ones. Orders above the cap are refused.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{AttributedGraph, NodePermutation};
use crate::scalar::Scalar;

pub const DEFAULT_SYMMETRY_CAP: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryOptions {
    pub cap: usize,
    /// Attribute vectors closer than this count as equal; `None` is bitwise equality.
    pub tolerance: Option<f64>,
}

impl Default for SymmetryOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_SYMMETRY_CAP,
            tolerance: None,
        }
    }
}

impl SymmetryOptions {
    pub fn with_cap(cap: usize) -> Self {
        Self { cap, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryReport<T> {
    pub asymmetric: bool,
    pub chi: T,
    /// Non-identity permutation attaining `chi` (absent for symmetric graphs).
    pub witness: Option<NodePermutation>,
    pub permutations_examined: u64,
}

fn check_cap<T: Scalar>(g: &AttributedGraph<T>, cap: usize) -> Result<()> {
    if g.order() > cap {
        return Err(Error::UnsupportedSize { order: g.order(), cap });
    }
    Ok(())
}

fn same<T: Scalar>(a: &[T], b: &[T], tol: Option<T>) -> bool {
    match tol {
        None => a == b,
        Some(t) => a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum::<T>().sqrt() <= t,
    }
}

struct AutomorphismSearch<'a, T> {
    g: &'a AttributedGraph<T>,
    tol: Option<T>,
    // candidate images of each node: nodes with an equal attribute
    classes: Vec<Vec<usize>>,
    mapping: Vec<usize>,
    used: Vec<bool>,
    examined: u64,
}

impl<T: Scalar> AutomorphismSearch<'_, T> {
    fn consistent(&self, depth: usize, t: usize) -> bool {
        (0..depth).all(|j| {
            let u = self.mapping[j];
            same(self.g.attr(depth, j), self.g.attr(t, u), self.tol)
                && same(self.g.attr(j, depth), self.g.attr(u, t), self.tol)
        })
    }

    /// First non-identity automorphism in lexicographic order.
    fn descend(&mut self, depth: usize, moved: bool) -> bool {
        let n = self.g.order();
        if depth == n {
            self.examined += 1;
            return moved;
        }
        for k in 0..self.classes[depth].len() {
            let t = self.classes[depth][k];
            if self.used[t] || !self.consistent(depth, t) {
                continue;
            }
            self.used[t] = true;
            self.mapping[depth] = t;
            if self.descend(depth + 1, moved || t != depth) {
                return true;
            }
            self.used[t] = false;
        }
        false
    }
}

/// A non-identity automorphism of `g`, if one exists.
pub fn find_automorphism<T: Scalar>(g: &AttributedGraph<T>, opts: &SymmetryOptions) -> Result<(Option<NodePermutation>, u64)> {
    check_cap(g, opts.cap)?;
    let n = g.order();
    let tol = opts.tolerance.map(T::lit);
    let classes: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&t| same(g.node_attr(i), g.node_attr(t), tol)).collect())
        .collect();
    // mutually distinct node attributes admit only the identity
    if classes.iter().all(|c| c.len() == 1) {
        return Ok((None, 0));
    }
    let mut s = AutomorphismSearch {
        g,
        tol,
        classes,
        mapping: vec![0; n],
        used: vec![false; n],
        examined: 0,
    };
    let found = s.descend(0, false);
    let perm = if found {
        Some(NodePermutation::new(s.mapping.clone())?)
    } else {
        None
    };
    Ok((perm, s.examined))
}

/// True iff the automorphism group of `g` is trivial.
pub fn is_asymmetric<T: Scalar>(g: &AttributedGraph<T>, cap: usize) -> Result<bool> {
    Ok(find_automorphism(g, &SymmetryOptions::with_cap(cap))?.0.is_none())
}

struct ChiSearch<'a, T> {
    g: &'a AttributedGraph<T>,
    best: T,
    best_map: Option<Vec<usize>>,
    mapping: Vec<usize>,
    used: Vec<bool>,
    examined: u64,
}

impl<T: Scalar> ChiSearch<'_, T> {
    fn sq(&self, i: usize, j: usize, t: usize, u: usize) -> T {
        self.g
            .attr(i, j)
            .iter()
            .zip(self.g.attr(t, u))
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum()
    }

    fn descend(&mut self, depth: usize, partial: T, moved: bool) {
        let n = self.g.order();
        if depth == n {
            self.examined += 1;
            if moved && partial < self.best {
                self.best = partial;
                self.best_map = Some(self.mapping.clone());
            }
            return;
        }
        for t in 0..n {
            if self.used[t] {
                continue;
            }
            let mut add = self.sq(depth, depth, t, t);
            for j in 0..depth {
                let u = self.mapping[j];
                add = add + self.sq(depth, j, t, u) + self.sq(j, depth, u, t);
            }
            let next = partial + add;
            // keep the first (lexicographically smallest) minimizer
            if next >= self.best {
                continue;
            }
            self.used[t] = true;
            self.mapping[depth] = t;
            self.descend(depth + 1, next, moved || t != depth);
            self.used[t] = false;
        }
    }
}

/// Degree of asymmetry: the smallest Frobenius distance between two distinct
/// representations of `g`, zero for symmetric graphs.
pub fn degree_of_asymmetry<T: Scalar>(g: &AttributedGraph<T>, opts: &SymmetryOptions) -> Result<SymmetryReport<T>> {
    let (auto, examined) = find_automorphism(g, opts)?;
    if g.order() < 2 {
        // one representation only: the minimum over distinct pairs is empty
        return Ok(SymmetryReport {
            asymmetric: true,
            chi: T::infinity(),
            witness: None,
            permutations_examined: examined,
        });
    }
    if auto.is_some() {
        return Ok(SymmetryReport {
            asymmetric: false,
            chi: T::zero(),
            witness: None,
            permutations_examined: examined,
        });
    }
    let n = g.order();
    let mut s = ChiSearch {
        g,
        best: T::infinity(),
        best_map: None,
        mapping: vec![0; n],
        used: vec![false; n],
        examined: 0,
    };
    s.descend(0, T::zero(), false);
    let map = s.best_map.expect("order >= 2 has a non-identity permutation");
    Ok(SymmetryReport {
        asymmetric: true,
        chi: s.best.sqrt(),
        witness: Some(NodePermutation::new(map)?),
        permutations_examined: examined + s.examined,
    })
}
