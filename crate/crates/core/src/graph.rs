//! Attributed graphs stored as dense attribute matrices.
//!
//! A graph of order `m` with attributes in `R^d` is an `m x m` matrix whose
//! entries are `d`-vectors: entry `(i, i)` is the attribute of node `i`, entry
//! `(i, j)` the attribute of edge `(i, j)`. Non-edges are the off-diagonal
//! entries equal to the zero vector, so every graph is complete and all the
//! geometry reduces to Euclidean operations on the flattened matrix.
//!
//! A value of [`AttributedGraph`] is one matrix representation. Other
//! representations of the same abstract graph are obtained with
//! [`AttributedGraph::permute`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Scalar};

/// Default norm threshold for reporting edges.
pub const EDGE_EPSILON: f64 = 1e-9;

/// A bijection on `{0, .., n-1}`; `mapping[i]` is the image of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct NodePermutation {
    mapping: Vec<usize>,
}

impl NodePermutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &m in &mapping {
            if m >= n || seen[m] {
                return Err(Error::invalid(format!(
                    "mapping {mapping:?} is not a bijection on 0..{n}"
                )));
            }
            seen[m] = true;
        }
        Ok(Self { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mapping: (0..n).collect(),
        }
    }

    /// The permutation exchanging `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.mapping.swap(a, b);
        p
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.mapping[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.mapping
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &m)| i == m)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &m) in self.mapping.iter().enumerate() {
            inv[m] = i;
        }
        Self { mapping: inv }
    }

    /// `self` after `first`: `i -> self(first(i))`.
    pub fn compose(&self, first: &NodePermutation) -> Result<Self> {
        if self.len() != first.len() {
            return Err(Error::invalid("composing permutations of different size"));
        }
        Ok(Self {
            mapping: first.mapping.iter().map(|&j| self.mapping[j]).collect(),
        })
    }

    /// Extend to `{0, .., n-1}` by fixing the new indices.
    pub fn extend(&self, n: usize) -> Self {
        let mut mapping = self.mapping.clone();
        mapping.extend(self.len()..n.max(self.len()));
        Self { mapping }
    }
}

impl TryFrom<Vec<usize>> for NodePermutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<NodePermutation> for Vec<usize> {
    fn from(p: NodePermutation) -> Self {
        p.mapping
    }
}

/// Dense matrix representation of an attributed graph.
#[derive(Clone, Debug, PartialEq)]
pub struct AttributedGraph<T> {
    order: usize,
    attr_dim: usize,
    directed: bool,
    // row-major (i, j, k)
    attrs: Vec<T>,
}

impl<T: Scalar> AttributedGraph<T> {
    /// Build from a flat row-major `order x order x attr_dim` buffer.
    ///
    /// Undirected input must already be symmetric; it is rejected otherwise.
    pub fn new(order: usize, attr_dim: usize, attrs: Vec<T>, directed: bool) -> Result<Self> {
        if order == 0 || attr_dim == 0 {
            return Err(Error::invalid("order and attr_dim must be positive"));
        }
        if attrs.len() != order * order * attr_dim {
            return Err(Error::invalid(format!(
                "expected {} attribute values for order {order}, dim {attr_dim}, got {}",
                order * order * attr_dim,
                attrs.len()
            )));
        }
        if let Some(pos) = attrs.iter().position(|v| !v.is_finite()) {
            let cell = pos / attr_dim;
            return Err(Error::invalid(format!(
                "non-finite attribute at ({}, {})",
                cell / order,
                cell % order
            )));
        }
        let g = Self {
            order,
            attr_dim,
            directed,
            attrs,
        };
        if !directed {
            for i in 0..order {
                for j in (i + 1)..order {
                    if g.attr(i, j) != g.attr(j, i) {
                        return Err(Error::invalid(format!(
                            "undirected graph has asymmetric entries at ({i}, {j})"
                        )));
                    }
                }
            }
        }
        Ok(g)
    }

    /// The graph of the given order with every attribute zero.
    pub fn zeros(order: usize, attr_dim: usize, directed: bool) -> Self {
        assert!(order > 0 && attr_dim > 0, "order and attr_dim must be positive");
        Self {
            order,
            attr_dim,
            directed,
            attrs: vec![T::zero(); order * order * attr_dim],
        }
    }

    /// Build from `rows[i][j]` attribute vectors.
    pub fn from_nested(rows: &[Vec<Vec<T>>], directed: bool) -> Result<Self> {
        let order = rows.len();
        let attr_dim = rows
            .first()
            .and_then(|r| r.first())
            .map(Vec::len)
            .unwrap_or(0);
        let mut attrs = Vec::with_capacity(order * order * attr_dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::invalid(format!("row {i} has {} entries, expected {order}", row.len())));
            }
            for (j, v) in row.iter().enumerate() {
                if v.len() != attr_dim {
                    return Err(Error::invalid(format!("entry ({i}, {j}) has dimension {}", v.len())));
                }
                attrs.extend_from_slice(v);
            }
        }
        Self::new(order, attr_dim, attrs, directed)
    }

    /// Edgeless undirected graph with the given node attributes.
    pub fn from_nodes(nodes: &[Vec<T>]) -> Result<Self> {
        let order = nodes.len();
        let attr_dim = nodes.first().map(Vec::len).unwrap_or(0);
        if order == 0 || attr_dim == 0 {
            return Err(Error::invalid("need at least one node with a non-empty attribute"));
        }
        let mut g = Self::zeros(order, attr_dim, false);
        for (i, v) in nodes.iter().enumerate() {
            g.set_node(i, v)?;
        }
        Ok(g)
    }

    /// Scalar-attributed graph from a square matrix (`attr_dim = 1`).
    pub fn from_scalar_matrix(rows: &[Vec<T>], directed: bool) -> Result<Self> {
        let nested: Vec<Vec<Vec<T>>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| vec![v]).collect())
            .collect();
        Self::from_nested(&nested, directed)
    }

    pub fn set_node(&mut self, i: usize, value: &[T]) -> Result<()> {
        self.set_entry(i, i, value)
    }

    /// Set the attribute of edge `(i, j)`, and of `(j, i)` for undirected graphs.
    pub fn set_edge(&mut self, i: usize, j: usize, value: &[T]) -> Result<()> {
        if i == j {
            return Err(Error::invalid("edge endpoints must differ"));
        }
        self.set_entry(i, j, value)?;
        if !self.directed {
            self.set_entry(j, i, value)?;
        }
        Ok(())
    }

    fn set_entry(&mut self, i: usize, j: usize, value: &[T]) -> Result<()> {
        if i >= self.order || j >= self.order {
            return Err(Error::invalid(format!("position ({i}, {j}) out of range for order {}", self.order)));
        }
        if value.len() != self.attr_dim {
            return Err(Error::invalid(format!(
                "attribute has dimension {}, expected {}",
                value.len(),
                self.attr_dim
            )));
        }
        if value.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite attribute"));
        }
        let o = self.offset(i, j);
        self.attrs[o..o + self.attr_dim].copy_from_slice(value);
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn attr_dim(&self) -> usize {
        self.attr_dim
    }

    #[inline]
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        (i * self.order + j) * self.attr_dim
    }

    /// Attribute vector at matrix position `(i, j)`.
    #[inline]
    pub fn attr(&self, i: usize, j: usize) -> &[T] {
        let o = self.offset(i, j);
        &self.attrs[o..o + self.attr_dim]
    }

    #[inline]
    pub fn node_attr(&self, i: usize) -> &[T] {
        self.attr(i, i)
    }

    /// The flattened row-major attribute buffer.
    pub fn as_slice(&self) -> &[T] {
        &self.attrs
    }

    /// Convert the scalar type.
    pub fn cast<U: Scalar>(&self) -> AttributedGraph<U> {
        AttributedGraph {
            order: self.order,
            attr_dim: self.attr_dim,
            directed: self.directed,
            attrs: self.attrs.iter().map(|&v| U::lit(v.as_f64())).collect(),
        }
    }

    /// Expand to order `n` with isolated zero-attribute nodes.
    pub fn pad(&self, n: usize) -> Result<Self> {
        if n < self.order {
            return Err(Error::invalid(format!("cannot pad order {} down to {n}", self.order)));
        }
        if n == self.order {
            return Ok(self.clone());
        }
        let d = self.attr_dim;
        let mut attrs = vec![T::zero(); n * n * d];
        for i in 0..self.order {
            let src = self.offset(i, 0);
            let dst = i * n * d;
            attrs[dst..dst + self.order * d].copy_from_slice(&self.attrs[src..src + self.order * d]);
        }
        Ok(Self {
            order: n,
            attr_dim: d,
            directed: self.directed,
            attrs,
        })
    }

    /// Reorder nodes: the result `r` satisfies `r[p(i)][p(j)] = self[i][j]`.
    pub fn permute(&self, p: &NodePermutation) -> Result<Self> {
        if p.len() != self.order {
            return Err(Error::invalid(format!(
                "permutation of size {} applied to graph of order {}",
                p.len(),
                self.order
            )));
        }
        let n = self.order;
        let d = self.attr_dim;
        let mut attrs = vec![T::zero(); n * n * d];
        for i in 0..n {
            let pi = p.apply(i);
            for j in 0..n {
                let dst = (pi * n + p.apply(j)) * d;
                attrs[dst..dst + d].copy_from_slice(self.attr(i, j));
            }
        }
        Ok(Self {
            order: n,
            attr_dim: d,
            directed: self.directed,
            attrs,
        })
    }

    /// Multiply every node and edge attribute by `lambda`.
    pub fn scale(&self, lambda: T) -> Self {
        Self {
            order: self.order,
            attr_dim: self.attr_dim,
            directed: self.directed,
            attrs: self.attrs.iter().map(|&v| v * lambda).collect(),
        }
    }

    /// `self + eta * (target - self)`, entrywise. Both must have the same shape.
    /// A full step returns `target` exactly.
    pub fn step_towards(&self, target: &Self, eta: T) -> Result<Self> {
        check_shape(self, target)?;
        if eta == T::one() {
            return Ok(Self {
                directed: self.directed || target.directed,
                ..target.clone()
            });
        }
        Ok(Self {
            order: self.order,
            attr_dim: self.attr_dim,
            directed: self.directed || target.directed,
            attrs: self
                .attrs
                .iter()
                .zip(&target.attrs)
                .map(|(&m, &x)| m + eta * (x - m))
                .collect(),
        })
    }

    /// Squared Frobenius norm of the attribute matrix, `inner(g, g)`.
    pub fn norm_squared(&self) -> T {
        compensated_sum(self.attrs.iter().map(|&v| v * v))
    }

    pub fn is_zero(&self) -> bool {
        self.attrs.iter().all(|v| v.is_zero())
    }

    /// Off-diagonal positions whose attribute norm exceeds `eps`. Undirected
    /// graphs report each edge once as `(i, j)` with `i < j`.
    pub fn edge_set(&self, eps: T) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.order {
            let start = if self.directed { 0 } else { i + 1 };
            for j in start..self.order {
                if i == j {
                    continue;
                }
                let sq: T = self.attr(i, j).iter().map(|&v| v * v).sum();
                if sq.sqrt() > eps {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

fn check_shape<T: Scalar>(a: &AttributedGraph<T>, b: &AttributedGraph<T>) -> Result<()> {
    if a.order != b.order || a.attr_dim != b.attr_dim {
        return Err(Error::invalid(format!(
            "shape mismatch: order {} dim {} vs order {} dim {}",
            a.order, a.attr_dim, b.order, b.attr_dim
        )));
    }
    Ok(())
}

/// Matrix inner product `sum_ij <a_ij, b_ij>` of two fixed representations.
pub fn inner<T: Scalar>(a: &AttributedGraph<T>, b: &AttributedGraph<T>) -> Result<T> {
    check_shape(a, b)?;
    Ok(compensated_sum(a.attrs.iter().zip(&b.attrs).map(|(&x, &y)| x * y)))
}

/// Squared Frobenius distance of two fixed representations.
pub fn squared_frobenius_distance<T: Scalar>(a: &AttributedGraph<T>, b: &AttributedGraph<T>) -> Result<T> {
    check_shape(a, b)?;
    Ok(compensated_sum(a.attrs.iter().zip(&b.attrs).map(|(&x, &y)| {
        let d = x - y;
        d * d
    })))
}

/// Frobenius distance `||A - B||` of two fixed representations.
pub fn frobenius_distance<T: Scalar>(a: &AttributedGraph<T>, b: &AttributedGraph<T>) -> Result<T> {
    squared_frobenius_distance(a, b).map(T::sqrt)
}

/// Entrywise weighted average of already aligned representations.
pub fn blend<T: Scalar>(parts: &[(&AttributedGraph<T>, T)]) -> Result<AttributedGraph<T>> {
    let (first, _) = parts.first().ok_or_else(|| Error::invalid("blend of an empty list"))?;
    for (g, w) in parts {
        check_shape(first, g)?;
        if !(*w >= T::zero()) {
            return Err(Error::invalid("blend weights must be nonnegative"));
        }
    }
    let total = compensated_sum(parts.iter().map(|(_, w)| *w));
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(4.0));
    if (total - T::one()).abs() > tol {
        return Err(Error::invalid(format!("blend weights sum to {total}, expected 1")));
    }
    let mut attrs = vec![T::zero(); first.attrs.len()];
    for (g, w) in parts {
        for (acc, &v) in attrs.iter_mut().zip(&g.attrs) {
            *acc = *acc + *w * v;
        }
    }
    Ok(AttributedGraph {
        order: first.order,
        attr_dim: first.attr_dim,
        directed: parts.iter().any(|(g, _)| g.directed),
        attrs,
    })
}

/// Arithmetic mean `(1/n) sum_i A_i` of aligned representations.
pub fn average<T: Scalar>(graphs: &[AttributedGraph<T>]) -> Result<AttributedGraph<T>> {
    let first = graphs.first().ok_or_else(|| Error::invalid("average of an empty list"))?;
    let mut attrs = vec![T::zero(); first.attrs.len()];
    for g in graphs {
        check_shape(first, g)?;
        for (acc, &v) in attrs.iter_mut().zip(&g.attrs) {
            *acc = *acc + v;
        }
    }
    let n = T::from_count(graphs.len());
    attrs.iter_mut().for_each(|v| *v = *v / n);
    Ok(AttributedGraph {
        order: first.order,
        attr_dim: first.attr_dim,
        directed: graphs.iter().any(|g| g.directed),
        attrs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g1(v: f64) -> AttributedGraph<f64> {
        AttributedGraph::from_nodes(&[vec![v]]).unwrap()
    }

    fn arb_graph(order: usize, dim: usize) -> impl Strategy<Value = AttributedGraph<f64>> {
        prop::collection::vec(-3.0f64..3.0, order * order * dim).prop_map(move |mut v| {
            for i in 0..order {
                for j in 0..i {
                    for k in 0..dim {
                        v[(i * order + j) * dim + k] = v[(j * order + i) * dim + k];
                    }
                }
            }
            AttributedGraph::new(order, dim, v, false).unwrap()
        })
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = NodePermutation> {
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|m| NodePermutation::new(m).unwrap())
    }

    #[test]
    fn rejects_asymmetric_undirected() {
        let r = AttributedGraph::from_scalar_matrix(&[vec![1.0, 2.0], vec![3.0, 1.0]], false);
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
        assert!(AttributedGraph::from_scalar_matrix(&[vec![1.0, 2.0], vec![3.0, 1.0]], true).is_ok());
    }

    #[test]
    fn rejects_non_finite_and_bad_permutations() {
        assert!(AttributedGraph::new(1, 1, vec![f64::NAN], false).is_err());
        assert!(NodePermutation::new(vec![0, 0]).is_err());
        assert!(NodePermutation::new(vec![1, 2]).is_err());
    }

    #[test]
    fn pad_two_node_graph_to_three() {
        let g = AttributedGraph::from_scalar_matrix(&[vec![1.0, 2.0], vec![2.0, 3.0]], false).unwrap();
        let p = g.pad(3).unwrap();
        assert_eq!(p.order(), 3);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(p.attr(i, j), g.attr(i, j));
            }
        }
        for k in 0..3 {
            assert_eq!(p.attr(2, k), &[0.0]);
            assert_eq!(p.attr(k, 2), &[0.0]);
        }
        assert_eq!(g.pad(2).unwrap(), g);
        assert!(g.pad(1).is_err());
    }

    #[test]
    fn pad_single_node() {
        let p = g1(5.0).pad(2).unwrap();
        let expected = AttributedGraph::from_scalar_matrix(&[vec![5.0, 0.0], vec![0.0, 0.0]], false).unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn permute_swaps_node_attributes() {
        let g = AttributedGraph::from_nodes(&[vec![1.0], vec![2.0]]).unwrap();
        let swapped = g.permute(&NodePermutation::transposition(2, 0, 1)).unwrap();
        assert_eq!(swapped, AttributedGraph::from_nodes(&[vec![2.0], vec![1.0]]).unwrap());
        assert_eq!(g.permute(&NodePermutation::identity(2)).unwrap(), g);
        assert!(g.permute(&NodePermutation::identity(3)).is_err());
    }

    #[test]
    fn scale_and_inner_basics() {
        let g = AttributedGraph::from_scalar_matrix(&[vec![1.0, 2.0], vec![2.0, -1.0]], false).unwrap();
        assert_eq!(g.scale(1.0), g);
        assert!(g.scale(0.0).is_zero());
        assert_eq!(inner(&g, &AttributedGraph::zeros(2, 1, false)).unwrap(), 0.0);
        assert_eq!(inner(&g1(3.0), &g1(4.0)).unwrap(), 12.0);
        assert_eq!(inner(&g, &g).unwrap(), 10.0);
        assert_eq!(g.norm_squared(), 10.0);
        assert!(inner(&g, &g1(1.0)).is_err());
    }

    #[test]
    fn frobenius_distance_basics() {
        assert_eq!(frobenius_distance(&g1(3.0), &g1(4.0)).unwrap(), 1.0);
        let g = AttributedGraph::from_scalar_matrix(&[vec![1.0, 2.0], vec![2.0, -1.0]], false).unwrap();
        assert_eq!(frobenius_distance(&g, &g).unwrap(), 0.0);
    }

    #[test]
    fn frobenius_distance_matches_elementwise_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_xoshiro::SplitMix64::seed_from_u64(11);
        for _ in 0..20 {
            let mut a = AttributedGraph::<f64>::zeros(3, 2, true);
            let mut b = AttributedGraph::<f64>::zeros(3, 2, true);
            for i in 0..3 {
                for j in 0..3 {
                    a.set_entry(i, j, &[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).unwrap();
                    b.set_entry(i, j, &[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).unwrap();
                }
            }
            let mut oracle = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    for k in 0..2 {
                        oracle += (a.attr(i, j)[k] - b.attr(i, j)[k]).powi(2);
                    }
                }
            }
            let d = frobenius_distance(&a, &b).unwrap();
            assert!((d - oracle.sqrt()).abs() < 1e-12);
            let via_inner = (inner(&a, &a).unwrap() + inner(&b, &b).unwrap() - 2.0 * inner(&a, &b).unwrap()).sqrt();
            assert!((d - via_inner).abs() < 1e-9);
        }
    }

    #[test]
    fn blend_cases() {
        let g = g1(7.0);
        assert_eq!(blend(&[(&g, 1.0)]).unwrap(), g);
        assert_eq!(blend(&[(&g1(2.0), 0.5), (&g1(4.0), 0.5)]).unwrap(), g1(3.0));
        assert!(blend::<f64>(&[]).is_err());
        assert!(blend(&[(&g1(2.0), 0.5), (&g1(4.0), 0.6)]).is_err());
        assert!(blend(&[(&g1(2.0), 0.5), (&g.pad(2).unwrap(), 0.5)]).is_err());
    }

    #[test]
    fn blend_of_three_matches_direct_sum() {
        let gs: Vec<AttributedGraph<f64>> = (0..3)
            .map(|k| {
                let k = k as f64;
                AttributedGraph::from_scalar_matrix(
                    &[
                        vec![k, 1.0 + k, 0.0],
                        vec![1.0 + k, 2.0 * k, 0.5],
                        vec![0.0, 0.5, -k],
                    ],
                    false,
                )
                .unwrap()
            })
            .collect();
        let third = 1.0 / 3.0;
        let m = blend(&[(&gs[0], third), (&gs[1], third), (&gs[2], third)]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let direct: f64 = gs.iter().map(|g| g.attr(i, j)[0]).sum::<f64>() / 3.0;
                assert!((m.attr(i, j)[0] - direct).abs() < 1e-15);
            }
        }
        let avg = average(&gs).unwrap();
        assert!(frobenius_distance(&m, &avg).unwrap() < 1e-14);
    }

    #[test]
    fn edge_set_reporting() {
        assert!(AttributedGraph::<f64>::zeros(3, 1, false).edge_set(1e-9).is_empty());
        let mut g = AttributedGraph::<f64>::zeros(3, 1, false);
        g.set_edge(0, 2, &[0.5]).unwrap();
        assert_eq!(g.edge_set(1e-9), vec![(0, 2)]);
        // a blended mean with a residual edge entry below the threshold
        let mut h = AttributedGraph::<f64>::zeros(3, 1, false);
        h.set_edge(0, 2, &[0.5]).unwrap();
        h.set_edge(1, 2, &[2e-12]).unwrap();
        let mut k = h.clone();
        k.set_edge(1, 2, &[0.0]).unwrap();
        let m = blend(&[(&h, 0.5), (&k, 0.5)]).unwrap();
        assert!(m.attr(1, 2)[0] > 0.0);
        assert_eq!(m.edge_set(1e-9), vec![(0, 2)]);
    }

    #[test]
    fn f32_graphs_work() {
        let a = AttributedGraph::<f32>::from_nodes(&[vec![3.0]]).unwrap();
        let b = AttributedGraph::<f32>::from_nodes(&[vec![4.0]]).unwrap();
        assert_eq!(frobenius_distance(&a, &b).unwrap(), 1.0f32);
        assert_eq!(a.cast::<f64>(), g1(3.0));
    }

    proptest! {
        #[test]
        fn permutation_preserves_geometry(
            (a, b, p) in (1usize..5).prop_flat_map(|n| (arb_graph(n, 2), arb_graph(n, 2), arb_perm(n)))
        ) {
            let pa = a.permute(&p).unwrap();
            let pb = b.permute(&p).unwrap();
            prop_assert!((pa.norm_squared() - a.norm_squared()).abs() < 1e-12);
            let d0 = frobenius_distance(&a, &b).unwrap();
            let d1 = frobenius_distance(&pa, &pb).unwrap();
            prop_assert!((d0 - d1).abs() < 1e-12);
            prop_assert_eq!(pa.permute(&p.inverse()).unwrap(), a.clone());
            // blend is permutation equivariant
            let m = blend(&[(&a, 0.25), (&b, 0.75)]).unwrap();
            let pm = blend(&[(&pa, 0.25), (&pb, 0.75)]).unwrap();
            prop_assert_eq!(m.permute(&p).unwrap(), pm);
        }

        #[test]
        fn padding_and_scaling_laws(
            (a, b) in (1usize..4).prop_flat_map(|n| (arb_graph(n, 1), arb_graph(n, 1))),
            extra in 0usize..3,
            lambda in -4.0f64..4.0,
        ) {
            let n = a.order() + extra;
            let ip = inner(&a.pad(n).unwrap(), &b.pad(n).unwrap()).unwrap();
            prop_assert!((ip - inner(&a, &b).unwrap()).abs() < 1e-12);
            let s = a.scale(lambda);
            let lhs = inner(&s, &s).unwrap();
            prop_assert!((lhs - lambda * lambda * a.norm_squared()).abs() < 1e-9 * (1.0 + lhs.abs()));
        }
    }
}
