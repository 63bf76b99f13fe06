//! Datasets: GXL ingestion, the native JSON format, synthetic generators and
//! attribute normalisation. Everything here works in `f64`.

mod generate;
mod gxl;
mod native;
mod normalize;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frechet::Sample;

pub use generate::{generate, letter_prototype, Family, GeneratorSpec, LETTERS};
pub use gxl::{load_dataset, load_split_dataset, parse_cxl, parse_gxl, AttrRule, GxlSchema};
pub use native::{
    dataset_from_json, dataset_to_json, graph_from_json, graph_to_json, read_dataset, read_graph_or_dataset,
    write_dataset, write_graph,
};
pub use normalize::{normalize_attributes, DimStats, Normalization};

/// Split names accepted in [`Dataset::splits`].
pub const SPLIT_NAMES: [&str; 3] = ["train", "validation", "test"];

/// Where a dataset came from.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(source: impl Into<String>) -> Self {
        Self { source: source.into(), details: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.details.insert(key.to_string(), value.to_string());
        self
    }
}

/// A named, optionally labelled and split, collection of graphs.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub sample: Sample<f64>,
    pub splits: Option<BTreeMap<String, Vec<usize>>>,
    pub provenance: Provenance,
}

impl Dataset {
    pub fn new(
        name: impl Into<String>,
        sample: Sample<f64>,
        splits: Option<BTreeMap<String, Vec<usize>>>,
        provenance: Provenance,
    ) -> Result<Self> {
        if let Some(splits) = &splits {
            if sample.labels().is_none() {
                return Err(Error::invalid("splits require labels"));
            }
            let mut seen = vec![false; sample.len()];
            for (name, idx) in splits {
                if !SPLIT_NAMES.contains(&name.as_str()) {
                    return Err(Error::invalid(format!("unknown split `{name}`")));
                }
                for &i in idx {
                    if i >= sample.len() {
                        return Err(Error::invalid(format!("split `{name}` index {i} out of range")));
                    }
                    if std::mem::replace(&mut seen[i], true) {
                        return Err(Error::invalid(format!("graph {i} belongs to more than one split")));
                    }
                }
            }
        }
        Ok(Self { name: name.into(), sample, splits, provenance })
    }

    pub fn len(&self) -> usize {
        self.sample.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sample.is_empty()
    }

    /// The graphs of one split.
    pub fn split(&self, name: &str) -> Result<Sample<f64>> {
        let idx = self
            .splits
            .as_ref()
            .and_then(|s| s.get(name))
            .ok_or_else(|| Error::invalid(format!("dataset `{}` has no split `{name}`", self.name)))?;
        self.sample.subset(idx)
    }

    /// Indices grouped by label, classes in sorted order.
    pub fn classes(&self) -> Result<BTreeMap<String, Vec<usize>>> {
        let labels = self
            .sample
            .labels()
            .ok_or_else(|| Error::invalid(format!("dataset `{}` is unlabelled", self.name)))?;
        let mut out: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            out.entry(l.clone()).or_default().push(i);
        }
        Ok(out)
    }
}
