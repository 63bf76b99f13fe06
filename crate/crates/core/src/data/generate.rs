//! Synthetic datasets: distorted copies of prototypes, or random graphs.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{Dataset, Provenance};
use crate::error::{Error, Result};
use crate::frechet::Sample;
use crate::rng::{rng_from, tag};
use crate::Graph;

/// Built-in letter prototypes.
pub const LETTERS: &str = "AEFHIKLMNTVWXYZ";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    LetterLike,
    RandomUniform,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorSpec {
    pub family: Family,
    /// Letter-like: distort this graph instead of the built-in letters.
    #[serde(skip)]
    pub prototype: Option<Graph>,
    /// Letter-like: built-in prototypes to use, one class each.
    pub letters: String,
    pub noise_sigma: f64,
    /// Probability of toggling each node pair's edge.
    pub structural_noise: f64,
    /// Graphs per class (letter-like) or in total (random-uniform).
    pub count: usize,
    pub seed: u64,
    /// Random-uniform: inclusive order range.
    pub order_range: (usize, usize),
    pub density: f64,
    pub attr_dim: usize,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        Self {
            family: Family::LetterLike,
            prototype: None,
            letters: LETTERS.to_string(),
            noise_sigma: 0.1,
            structural_noise: 0.0,
            count: 10,
            seed: 0,
            order_range: (3, 6),
            density: 0.5,
            attr_dim: 2,
        }
    }
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::invalid(m.to_string()));
        if self.count < 1 {
            return bad("count must be at least 1");
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad("noise_sigma must be nonnegative");
        }
        if !(0.0..=1.0).contains(&self.structural_noise) {
            return bad("structural_noise must lie in [0, 1]");
        }
        match self.family {
            Family::LetterLike if self.prototype.is_none() => {
                if self.letters.is_empty() {
                    return bad("no letters selected");
                }
                for c in self.letters.chars() {
                    letter_prototype(c)?;
                }
            }
            Family::LetterLike => {}
            Family::RandomUniform => {
                let (lo, hi) = self.order_range;
                if lo < 1 || lo > hi {
                    return bad("order_range must satisfy 1 <= lo <= hi");
                }
                if !(0.0..=1.0).contains(&self.density) {
                    return bad("density must lie in [0, 1]");
                }
                if self.attr_dim < 1 {
                    return bad("attr_dim must be positive");
                }
            }
        }
        Ok(())
    }
}

/// Letter drawn as a line graph: nodes carry `(x, y, 0)`, strokes are edges
/// with attribute `(0, 0, 1)`.
pub fn letter_prototype(letter: char) -> Result<Graph> {
    let (nodes, edges): (&[(f64, f64)], &[(usize, usize)]) = match letter.to_ascii_uppercase() {
        'A' => (&[(0.0, 0.0), (1.0, 4.0), (2.0, 0.0), (0.5, 2.0), (1.5, 2.0)], &[(0, 3), (3, 1), (1, 4), (4, 2), (3, 4)]),
        'E' => (
            &[(0.0, 0.0), (0.0, 2.0), (0.0, 4.0), (2.0, 0.0), (1.5, 2.0), (2.0, 4.0)],
            &[(0, 1), (1, 2), (0, 3), (1, 4), (2, 5)],
        ),
        'F' => (&[(0.0, 0.0), (0.0, 2.0), (0.0, 4.0), (1.5, 2.0), (2.0, 4.0)], &[(0, 1), (1, 2), (1, 3), (2, 4)]),
        'H' => (
            &[(0.0, 0.0), (0.0, 2.0), (0.0, 4.0), (2.0, 0.0), (2.0, 2.0), (2.0, 4.0)],
            &[(0, 1), (1, 2), (3, 4), (4, 5), (1, 4)],
        ),
        'I' => (&[(1.0, 0.0), (1.0, 4.0)], &[(0, 1)]),
        'K' => (&[(0.0, 0.0), (0.0, 2.0), (0.0, 4.0), (2.0, 0.0), (2.0, 4.0)], &[(0, 1), (1, 2), (1, 3), (1, 4)]),
        'L' => (&[(0.0, 4.0), (0.0, 0.0), (2.0, 0.0)], &[(0, 1), (1, 2)]),
        'M' => (&[(0.0, 0.0), (0.0, 4.0), (1.0, 2.0), (2.0, 4.0), (2.0, 0.0)], &[(0, 1), (1, 2), (2, 3), (3, 4)]),
        'N' => (&[(0.0, 0.0), (0.0, 4.0), (2.0, 0.0), (2.0, 4.0)], &[(0, 1), (1, 2), (2, 3)]),
        'T' => (&[(0.0, 4.0), (1.0, 4.0), (2.0, 4.0), (1.0, 0.0)], &[(0, 1), (1, 2), (1, 3)]),
        'V' => (&[(0.0, 4.0), (1.0, 0.0), (2.0, 4.0)], &[(0, 1), (1, 2)]),
        'W' => (&[(0.0, 4.0), (0.5, 0.0), (1.0, 2.0), (1.5, 0.0), (2.0, 4.0)], &[(0, 1), (1, 2), (2, 3), (3, 4)]),
        'X' => (&[(0.0, 0.0), (0.0, 4.0), (1.0, 2.0), (2.0, 0.0), (2.0, 4.0)], &[(0, 2), (1, 2), (2, 3), (2, 4)]),
        'Y' => (&[(0.0, 4.0), (1.0, 2.0), (2.0, 4.0), (1.0, 0.0)], &[(0, 1), (1, 2), (1, 3)]),
        'Z' => (&[(0.0, 4.0), (2.0, 4.0), (0.0, 0.0), (2.0, 0.0)], &[(0, 1), (1, 2), (2, 3)]),
        other => return Err(Error::invalid(format!("no built-in prototype for letter `{other}`"))),
    };
    let mut g = Graph::zeros(nodes.len(), 3, false);
    for (i, &(x, y)) in nodes.iter().enumerate() {
        g.set_node(i, &[x, y, 0.0])?;
    }
    for &(i, j) in edges {
        g.set_edge(i, j, &[0.0, 0.0, 1.0])?;
    }
    Ok(g)
}

/// Mean attribute over the prototype's edges; the last unit vector if it has none.
fn mean_edge(p: &Graph) -> Vec<f64> {
    let d = p.attr_dim();
    let edges = p.edge_set(0.0);
    if edges.is_empty() {
        let mut v = vec![0.0; d];
        v[d - 1] = 1.0;
        return v;
    }
    let mut v = vec![0.0; d];
    for &(i, j) in &edges {
        for (acc, x) in v.iter_mut().zip(p.attr(i, j)) {
            *acc += x;
        }
    }
    v.iter().map(|x| x / edges.len() as f64).collect()
}

/// One distortion: Gaussian noise on node and edge attributes, then edge toggles.
fn distort(p: &Graph, sigma: f64, toggle: f64, rng: &mut impl Rng) -> Result<Graph> {
    let noise = Normal::new(0.0, sigma).map_err(|e| Error::invalid(e.to_string()))?;
    let jitter = |v: &[f64], rng: &mut dyn rand::RngCore| -> Vec<f64> {
        v.iter().map(|x| if sigma > 0.0 { x + noise.sample(rng) } else { *x }).collect()
    };
    let m = p.order();
    let base_edge = mean_edge(p);
    let mut g = Graph::zeros(m, p.attr_dim(), p.is_directed());
    for i in 0..m {
        g.set_node(i, &jitter(p.node_attr(i), rng))?;
    }
    for i in 0..m {
        let js: Vec<usize> = if p.is_directed() { (0..m).filter(|&j| j != i).collect() } else { ((i + 1)..m).collect() };
        for j in js {
            let present = p.attr(i, j).iter().any(|&x| x != 0.0);
            let flip = toggle > 0.0 && rng.gen_bool(toggle);
            let v = match (present, flip) {
                (true, false) => jitter(p.attr(i, j), rng),
                (false, true) => jitter(&base_edge, rng),
                _ => continue,
            };
            if v.iter().any(|&x| x != 0.0) {
                g.set_edge(i, j, &v)?;
            }
        }
    }
    Ok(g)
}

fn random_uniform(spec: &GeneratorSpec, rng: &mut impl Rng) -> Result<Graph> {
    let m = rng.gen_range(spec.order_range.0..=spec.order_range.1);
    let d = spec.attr_dim;
    let mut g = Graph::zeros(m, d, false);
    for i in 0..m {
        let v: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
        g.set_node(i, &v)?;
    }
    for i in 0..m {
        for j in (i + 1)..m {
            if rng.gen_bool(spec.density) {
                let v: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
                g.set_edge(i, j, &v)?;
            }
        }
    }
    Ok(g)
}

/// Generate a dataset; a pure function of `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<Dataset> {
    spec.validate()?;
    let prov = Provenance::new("generated")
        .with("family", format!("{:?}", spec.family))
        .with("seed", spec.seed)
        .with("noise_sigma", spec.noise_sigma)
        .with("structural_noise", spec.structural_noise)
        .with("count", spec.count);
    let (graphs, labels, name) = match (spec.family, &spec.prototype) {
        (Family::LetterLike, Some(p)) => {
            let mut rng = rng_from(spec.seed, &[tag("prototype")]);
            let gs = (0..spec.count)
                .map(|_| distort(p, spec.noise_sigma, spec.structural_noise, &mut rng))
                .collect::<Result<Vec<_>>>()?;
            (gs, vec!["prototype".to_string(); spec.count], "prototype-copies".to_string())
        }
        (Family::LetterLike, None) => {
            let mut gs = Vec::new();
            let mut labels = Vec::new();
            for c in spec.letters.chars() {
                let p = letter_prototype(c)?;
                let mut rng = rng_from(spec.seed, &[tag("letter"), c as u64]);
                for _ in 0..spec.count {
                    gs.push(distort(&p, spec.noise_sigma, spec.structural_noise, &mut rng)?);
                    labels.push(c.to_ascii_uppercase().to_string());
                }
            }
            (gs, labels, "letter-like".to_string())
        }
        (Family::RandomUniform, _) => {
            let mut rng = rng_from(spec.seed, &[tag("random-uniform")]);
            let gs = (0..spec.count).map(|_| random_uniform(spec, &mut rng)).collect::<Result<Vec<_>>>()?;
            (gs, vec!["random".to_string(); spec.count], "random-uniform".to_string())
        }
    };
    Dataset::new(name, Sample::with_labels(graphs, labels)?, None, prov)
}
