//! Per-dimension z-scoring of node and edge attributes.
//!
//! Node statistics run over all nodes; edge statistics over true edges only,
//! so non-edges stay zero. A zero-variance node dimension gets standard
//! deviation 1 (it is only centred). A zero-variance edge dimension is left
//! untouched: centring it would turn constant edge markers into non-edges.

use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{Error, Result};
use crate::frechet::Sample;
use crate::scalar::compensated_sum;
use crate::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimStats {
    pub mean: f64,
    pub std: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub node: Vec<DimStats>,
    pub edge: Vec<DimStats>,
}

fn is_edge(g: &Graph, i: usize, j: usize) -> bool {
    i != j && g.attr(i, j).iter().any(|&x| x != 0.0)
}

fn stats(columns: Vec<Vec<f64>>, constant_is_identity: bool) -> Vec<DimStats> {
    columns
        .into_iter()
        .map(|col| {
            if col.is_empty() {
                return DimStats { mean: 0.0, std: 1.0 };
            }
            let n = col.len() as f64;
            let mean = compensated_sum(col.iter().copied()) / n;
            let var = compensated_sum(col.iter().map(|&x| (x - mean) * (x - mean))) / n;
            match (var > 0.0, constant_is_identity) {
                (true, _) => DimStats { mean, std: var.sqrt() },
                (false, false) => DimStats { mean, std: 1.0 },
                (false, true) => DimStats { mean: 0.0, std: 1.0 },
            }
        })
        .collect()
}

impl Normalization {
    pub fn fit(graphs: &[Graph]) -> Result<Self> {
        let d = graphs.first().ok_or_else(|| Error::invalid("no graphs to normalise"))?.attr_dim();
        let mut node = vec![Vec::new(); d];
        let mut edge = vec![Vec::new(); d];
        for g in graphs {
            if g.attr_dim() != d {
                return Err(Error::invalid("attribute dimensions differ"));
            }
            for i in 0..g.order() {
                for j in 0..g.order() {
                    let target = if i == j {
                        &mut node
                    } else if is_edge(g, i, j) {
                        &mut edge
                    } else {
                        continue;
                    };
                    for (col, &x) in target.iter_mut().zip(g.attr(i, j)) {
                        col.push(x);
                    }
                }
            }
        }
        Ok(Self {
            node: stats(node, false),
            edge: stats(edge, true),
        })
    }

    fn map(&self, g: &Graph, f: impl Fn(f64, DimStats) -> f64) -> Result<Graph> {
        let (m, d) = (g.order(), g.attr_dim());
        if d != self.node.len() {
            return Err(Error::invalid(format!("graph has {d} dimensions, transform has {}", self.node.len())));
        }
        let mut out = Vec::with_capacity(m * m * d);
        for i in 0..m {
            for j in 0..m {
                let v = g.attr(i, j);
                match (i == j, is_edge(g, i, j)) {
                    (true, _) => out.extend(v.iter().zip(&self.node).map(|(&x, &s)| f(x, s))),
                    (false, true) => out.extend(v.iter().zip(&self.edge).map(|(&x, &s)| f(x, s))),
                    (false, false) => out.extend_from_slice(v),
                }
            }
        }
        Graph::new(m, d, out, g.is_directed())
    }

    pub fn apply(&self, g: &Graph) -> Result<Graph> {
        self.map(g, |x, s| (x - s.mean) / s.std)
    }

    pub fn invert(&self, g: &Graph) -> Result<Graph> {
        self.map(g, |x, s| x * s.std + s.mean)
    }

    pub fn apply_sample(&self, s: &Sample<f64>) -> Result<Sample<f64>> {
        let graphs = s.graphs().iter().map(|g| self.apply(g)).collect::<Result<Vec<_>>>()?;
        match s.labels() {
            Some(l) => Sample::with_labels(graphs, l.to_vec()),
            None => Sample::new(graphs),
        }
    }
}

/// Normalise a dataset with statistics fitted on it; the transform is
/// returned for reuse on held-out data.
pub fn normalize_attributes(d: &Dataset) -> Result<(Dataset, Normalization)> {
    let t = Normalization::fit(d.sample.graphs())?;
    let out = Dataset {
        sample: t.apply_sample(&d.sample)?,
        provenance: d.provenance.clone().with("normalized", true),
        ..d.clone()
    };
    Ok((out, t))
}
