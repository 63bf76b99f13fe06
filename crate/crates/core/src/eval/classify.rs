use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::align::{align, SolverConfig};
use crate::error::{Error, Result};
use crate::frechet::Sample;
use crate::means::{run, Algorithm, MeanConfig};
use crate::rng::{derive_seed, tag};
use crate::Graph;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub accuracy: f64,
    /// Sorted union of training and test classes.
    pub classes: Vec<String>,
    /// `confusion[true][predicted]` over `classes`.
    pub confusion: Vec<Vec<usize>>,
    pub predictions: Vec<String>,
}

fn labels<'a>(s: &'a Sample<f64>, what: &str) -> Result<&'a [String]> {
    s.labels().ok_or_else(|| Error::invalid(format!("{what} sample is unlabelled")))
}

/// 1-nearest-neighbour classification under the graph distance. Ties go to
/// the class that sorts first.
pub fn nn_classify(train: &Sample<f64>, test: &Sample<f64>, solver: &SolverConfig) -> Result<Classification> {
    let (train_labels, test_labels) = (labels(train, "training")?, labels(test, "test")?);
    if train.attr_dim() != test.attr_dim() {
        return Err(Error::invalid("training and test attribute dimensions differ"));
    }
    let mut classes: Vec<String> = train_labels.iter().chain(test_labels).cloned().collect();
    classes.sort();
    classes.dedup();
    let class_of = |l: &String| classes.binary_search(l).expect("collected above");
    let train_class: Vec<usize> = train_labels.iter().map(class_of).collect();

    let predicted: Vec<usize> = test
        .graphs()
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let mut best = (f64::INFINITY, usize::MAX);
            for (j, y) in train.graphs().iter().enumerate() {
                let cfg = solver.with_seed(derive_seed(solver.seed, &[i as u64, j as u64]));
                let d = align(x, y, &cfg)?.cost;
                let c = train_class[j];
                if d < best.0 || (d == best.0 && c < best.1) {
                    best = (d, c);
                }
            }
            Ok(best.1)
        })
        .collect::<Result<_>>()?;

    let mut confusion = vec![vec![0; classes.len()]; classes.len()];
    let mut correct = 0;
    for (l, &p) in test_labels.iter().zip(&predicted) {
        let t = class_of(l);
        confusion[t][p] += 1;
        correct += usize::from(t == p);
    }
    Ok(Classification {
        accuracy: correct as f64 / test.len() as f64,
        predictions: predicted.iter().map(|&p| classes[p].clone()).collect(),
        classes,
        confusion,
    })
}

/// One mean per class of a labelled training sample.
pub fn condensed_prototypes(
    train: &Sample<f64>,
    algorithm: Algorithm,
    cfg: &MeanConfig<f64>,
) -> Result<BTreeMap<String, Graph>> {
    let mut by_class: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, l) in labels(train, "training")?.iter().enumerate() {
        by_class.entry(l.clone()).or_default().push(i);
    }
    let groups: Vec<(String, Vec<usize>)> = by_class.into_iter().collect();
    groups
        .par_iter()
        .map(|(class, idx)| {
            let class_cfg = cfg.with_seed(derive_seed(cfg.seed, &[tag(class)]));
            let est = run(algorithm, &train.subset(idx)?, &class_cfg)?;
            Ok((class.clone(), est.mean))
        })
        .collect()
}

/// Prototypes as a labelled sample, classes in sorted order.
pub fn prototype_sample(protos: &BTreeMap<String, Graph>) -> Result<Sample<f64>> {
    Sample::with_labels(protos.values().cloned().collect(), protos.keys().cloned().collect())
}
