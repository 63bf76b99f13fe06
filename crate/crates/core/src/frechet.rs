//! Sample Fréchet functions and optimality diagnostics.
//!
//! For a sample `X_1..X_n` and a candidate graph `Z` the sample Fréchet
//! function is `F_n(Z) = sum_i L(delta(X_i, Z))`. With the squared loss its
//! minimum is the sample variation `V_n` and `sqrt(V_n)` the sample
//! dispersion. A local minimizer `M` is the arithmetic mean of the sample
//! representations optimally aligned to it; [`first_order_residual`] measures
//! how far a candidate is from satisfying that condition.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::align::{align, kernel, SolverConfig};
use crate::error::{Error, Result};
use crate::graph::{average, frobenius_distance, AttributedGraph};
use crate::rng::derive_seed;
use crate::scalar::{compensated_sum, Scalar};
use crate::symmetry::{degree_of_asymmetry, SymmetryOptions};

/// Loss applied to distances; `Power(1)` is the median loss, `Power(2)` the mean loss.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Loss {
    Power(f64),
}

impl Loss {
    pub const MEDIAN: Loss = Loss::Power(1.0);
    pub const MEAN: Loss = Loss::Power(2.0);

    pub fn new_power(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::invalid(format!("loss exponent must be >= 1, got {p}")));
        }
        Ok(Loss::Power(p))
    }

    pub fn apply<T: Scalar>(&self, a: T) -> T {
        match *self {
            Loss::Power(p) if p == 1.0 => a,
            Loss::Power(p) if p == 2.0 => a * a,
            Loss::Power(p) => a.powf(T::lit(p)),
        }
    }
}

/// An ordered, nonempty list of graphs with uniform attribute dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample<T> {
    graphs: Vec<AttributedGraph<T>>,
    labels: Option<Vec<String>>,
}

impl<T: Scalar> Sample<T> {
    pub fn new(graphs: Vec<AttributedGraph<T>>) -> Result<Self> {
        Self::build(graphs, None)
    }

    pub fn with_labels(graphs: Vec<AttributedGraph<T>>, labels: Vec<String>) -> Result<Self> {
        Self::build(graphs, Some(labels))
    }

    fn build(graphs: Vec<AttributedGraph<T>>, labels: Option<Vec<String>>) -> Result<Self> {
        let first = graphs.first().ok_or_else(|| Error::invalid("sample must be nonempty"))?;
        let d = first.attr_dim();
        if let Some(i) = graphs.iter().position(|g| g.attr_dim() != d) {
            return Err(Error::invalid(format!(
                "graph {i} has attribute dimension {}, expected {d}",
                graphs[i].attr_dim()
            )));
        }
        if let Some(l) = &labels {
            if l.len() != graphs.len() {
                return Err(Error::invalid(format!("{} labels for {} graphs", l.len(), graphs.len())));
            }
        }
        Ok(Self { graphs, labels })
    }

    pub fn graphs(&self) -> &[AttributedGraph<T>] {
        &self.graphs
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn attr_dim(&self) -> usize {
        self.graphs[0].attr_dim()
    }

    pub fn max_order(&self) -> usize {
        self.graphs.iter().map(AttributedGraph::order).max().unwrap_or(0)
    }

    /// The sub-sample at `indices`, labels carried along.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.len()) {
            return Err(Error::invalid(format!("index {bad} out of range for sample of {}", self.len())));
        }
        let graphs = indices.iter().map(|&i| self.graphs[i].clone()).collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| indices.iter().map(|&i| l[i].clone()).collect());
        Self::build(graphs, labels)
    }

    pub fn scale(&self, lambda: T) -> Self {
        Self {
            graphs: self.graphs.iter().map(|g| g.scale(lambda)).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn into_parts(self) -> (Vec<AttributedGraph<T>>, Option<Vec<String>>) {
        (self.graphs, self.labels)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrechetReport<T> {
    /// `F_n(Z)`.
    pub value: T,
    /// `F_n(Z)` read as the variation attained at `Z`.
    pub variation: T,
    /// `sqrt(variation)`.
    pub dispersion: T,
    /// `F_n(Z) / n`.
    pub normalized: T,
    /// `delta(X_i, Z)`.
    pub per_point: Vec<T>,
}

/// Solver configuration for aligning sample graph `i`; keeps heuristic runs
/// independent of evaluation order.
pub(crate) fn point_cfg(cfg: &SolverConfig, i: usize) -> SolverConfig {
    cfg.with_seed(derive_seed(cfg.seed, &[0x5a, i as u64]))
}

/// Sample graphs optimally aligned towards a common representation.
pub struct AlignedSample<T> {
    /// `target` padded to the common order.
    pub target: AttributedGraph<T>,
    pub representations: Vec<AttributedGraph<T>>,
    pub distances: Vec<T>,
    pub exact: bool,
}

/// Align every sample graph to `target`. Distances pad each pair to its own
/// larger order; the returned target and representations are padded to the
/// largest order involved.
pub fn align_sample<T: Scalar>(
    sample: &Sample<T>,
    target: &AttributedGraph<T>,
    cfg: &SolverConfig,
) -> Result<AlignedSample<T>> {
    if target.attr_dim() != sample.attr_dim() {
        return Err(Error::invalid("candidate and sample attribute dimensions differ"));
    }
    let n = sample.max_order().max(target.order());
    // distances use pairwise padding; only the outputs share the order `n`
    let aligned: Vec<(AttributedGraph<T>, T, bool)> = sample
        .graphs
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let a = align(x, target, &point_cfg(cfg, i))?;
            Ok((a.apply(x)?.pad(n)?, a.cost, a.exact))
        })
        .collect::<Result<_>>()?;
    let target = target.pad(n)?;
    let exact = aligned.iter().all(|(_, _, e)| *e);
    let (representations, distances) = aligned.into_iter().map(|(r, c, _)| (r, c)).unzip();
    Ok(AlignedSample {
        target,
        representations,
        distances,
        exact,
    })
}

/// Evaluate `F_n(z) = sum_i L(delta(X_i, z))`.
pub fn frechet_value<T: Scalar>(
    z: &AttributedGraph<T>,
    sample: &Sample<T>,
    loss: Loss,
    cfg: &SolverConfig,
) -> Result<FrechetReport<T>> {
    let per_point: Vec<T> = align_sample(sample, z, cfg)?.distances;
    Ok(report_from_distances(per_point, loss))
}

pub(crate) fn report_from_distances<T: Scalar>(per_point: Vec<T>, loss: Loss) -> FrechetReport<T> {
    let value = compensated_sum(per_point.iter().map(|&d| loss.apply(d)));
    let n = T::from_count(per_point.len().max(1));
    FrechetReport {
        value,
        variation: value,
        dispersion: value.sqrt(),
        normalized: value / n,
        per_point,
    }
}

/// `||M - (1/n) sum_i X_i||` with each `X_i` optimally aligned to `M`; zero at
/// every local minimizer of the squared-loss Fréchet function.
pub fn first_order_residual<T: Scalar>(
    m: &AttributedGraph<T>,
    sample: &Sample<T>,
    cfg: &SolverConfig,
) -> Result<T> {
    let aligned = align_sample(sample, m, cfg)?;
    let mean = average(&aligned.representations)?;
    frobenius_distance(&aligned.target, &mean)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MidpointReport<T> {
    pub is_midpoint: bool,
    pub d_xm: T,
    pub d_ym: T,
    pub d_xy: T,
}

/// Check `delta(x, m) = delta(y, m) = delta(x, y) / 2` within `tol`.
pub fn midpoint_check<T: Scalar>(
    x: &AttributedGraph<T>,
    y: &AttributedGraph<T>,
    m: &AttributedGraph<T>,
    cfg: &SolverConfig,
    tol: T,
) -> Result<MidpointReport<T>> {
    let d_xm = align(x, m, cfg)?.cost;
    let d_ym = align(y, m, cfg)?.cost;
    let d_xy = align(x, y, cfg)?.cost;
    let half = d_xy / T::lit(2.0);
    Ok(MidpointReport {
        is_midpoint: (d_xm - half).abs() <= tol && (d_ym - half).abs() <= tol,
        d_xm,
        d_ym,
        d_xy,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConeReport<T> {
    /// Degree of asymmetry of `z` padded to the sample's order.
    pub chi: T,
    /// Closest approach of each ray `{lambda X_i : lambda >= 0}` to `z`.
    pub ray_distances: Vec<T>,
    /// `chi / 2 - ray_distances[i]`.
    pub margins: Vec<T>,
    pub holds: bool,
}

/// Relative slack (on squared distances) when comparing ray distances to `chi / 2`.
pub const CONE_SLACK: f64 = 1e-12;

/// Sufficient uniqueness test: is every sample graph inside the cone
/// circumscribing the ball of radius `chi(z) / 2` around `z`?
///
/// The closest approach of a ray to `z` has the closed form
/// `sqrt(max(0, kappa(z,z) - max(kappa(X,z), 0)^2 / kappa(X,X)))`, and
/// `sqrt(kappa(z,z))` for the zero graph.
pub fn uniqueness_cone_check<T: Scalar>(
    sample: &Sample<T>,
    z: &AttributedGraph<T>,
    cfg: &SolverConfig,
) -> Result<ConeReport<T>> {
    let n = sample.max_order().max(z.order());
    let zp = z.pad(n)?;
    let chi = degree_of_asymmetry(&zp, &SymmetryOptions::default())?.chi;
    let kzz = zp.norm_squared();
    let ray_sq: Vec<T> = sample
        .graphs
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let kxx = x.norm_squared();
            if kxx == T::zero() {
                return Ok(kzz);
            }
            let kxz = kernel(x, &zp, &point_cfg(cfg, i))?.max(T::zero());
            Ok((kzz - kxz * kxz / kxx).max(T::zero()))
        })
        .collect::<Result<_>>()?;
    let radius = chi / T::lit(2.0);
    let slack = T::lit(CONE_SLACK) * kzz;
    let holds = ray_sq.iter().all(|&d2| d2 <= radius * radius + slack);
    let ray_distances: Vec<T> = ray_sq.iter().map(|d| d.sqrt()).collect();
    let margins = ray_distances.iter().map(|&d| radius - d).collect();
    Ok(ConeReport {
        chi,
        ray_distances,
        margins,
        holds,
    })
}

/// `sum_{i<j} ||R_i - R_j||` for concrete representations.
pub fn multiple_alignment_objective<T: Scalar>(reps: &[AttributedGraph<T>]) -> Result<T> {
    if reps.len() < 2 {
        return Err(Error::invalid("multiple alignment needs at least two graphs"));
    }
    let mut terms = Vec::with_capacity(reps.len() * (reps.len() - 1) / 2);
    for i in 0..reps.len() {
        for j in (i + 1)..reps.len() {
            terms.push(frobenius_distance(&reps[i], &reps[j])?);
        }
    }
    Ok(compensated_sum(terms))
}
