//! Canonical JSON: compact, shortest round-trip decimal floats, newline
//! terminated. Parsing what was written gives back the same bits.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Dataset, Provenance};
use crate::error::{Error, Result};
use crate::frechet::Sample;
use crate::Graph;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphRecord {
    order: usize,
    attr_dim: usize,
    directed: bool,
    attrs: Vec<Vec<Vec<f64>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetRecord {
    name: String,
    graphs: Vec<GraphRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    splits: Option<BTreeMap<String, Vec<usize>>>,
    #[serde(default)]
    provenance: Provenance,
}

fn record(g: &Graph) -> Result<GraphRecord> {
    if let Some(v) = g.as_slice().iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("cannot serialize non-finite attribute {v}")));
    }
    let m = g.order();
    Ok(GraphRecord {
        order: m,
        attr_dim: g.attr_dim(),
        directed: g.is_directed(),
        attrs: (0..m).map(|i| (0..m).map(|j| g.attr(i, j).to_vec()).collect()).collect(),
    })
}

fn graph_from_record(r: GraphRecord, at: &str) -> Result<Graph> {
    let bad = |msg: String| Error::parse(at, msg);
    if r.attrs.len() != r.order || r.attrs.iter().any(|row| row.len() != r.order) {
        return Err(bad(format!("attrs is not {0} x {0}", r.order)));
    }
    if r.attrs.iter().flatten().any(|v| v.len() != r.attr_dim) {
        return Err(bad(format!("attribute vectors must have length {}", r.attr_dim)));
    }
    Graph::from_nested(&r.attrs, r.directed).map_err(|e| bad(e.to_string()))
}

fn to_line<S: Serialize>(value: &S) -> Result<String> {
    let mut s = serde_json::to_string(value).map_err(|e| Error::invalid(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn parse_json<'a, D: Deserialize<'a>>(text: &'a str, what: &str) -> Result<D> {
    serde_json::from_str(text).map_err(|e| Error::parse(format!("{what} line {}, column {}", e.line(), e.column()), e.to_string()))
}

pub fn graph_to_json(g: &Graph) -> Result<String> {
    to_line(&record(g)?)
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    graph_from_record(parse_json(text, "graph")?, "graph")
}

pub fn dataset_to_json(d: &Dataset) -> Result<String> {
    let rec = DatasetRecord {
        name: d.name.clone(),
        graphs: d.sample.graphs().iter().map(record).collect::<Result<_>>()?,
        labels: d.sample.labels().map(<[String]>::to_vec),
        splits: d.splits.clone(),
        provenance: d.provenance.clone(),
    };
    to_line(&rec)
}

pub fn dataset_from_json(text: &str) -> Result<Dataset> {
    let rec: DatasetRecord = parse_json(text, "dataset")?;
    let graphs = rec
        .graphs
        .into_iter()
        .enumerate()
        .map(|(i, g)| graph_from_record(g, &format!("dataset graph {i}")))
        .collect::<Result<Vec<_>>>()?;
    let sample = match rec.labels {
        Some(labels) => Sample::with_labels(graphs, labels),
        None => Sample::new(graphs),
    }
    .map_err(|e| Error::parse("dataset", e.to_string()))?;
    Dataset::new(rec.name, sample, rec.splits, rec.provenance)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    dataset_from_json(&read(path.as_ref())?).map_err(|e| at_path(e, path.as_ref()))
}

pub fn write_dataset(path: impl AsRef<Path>, d: &Dataset) -> Result<()> {
    write(path.as_ref(), &dataset_to_json(d)?)
}

pub fn write_graph(path: impl AsRef<Path>, g: &Graph) -> Result<()> {
    write(path.as_ref(), &graph_to_json(g)?)
}

/// Read a native file holding either a dataset or a single graph (wrapped as
/// a one-graph dataset named after the file).
pub fn read_graph_or_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = read(path)?;
    let value: serde_json::Value = parse_json(&text, "input").map_err(|e| at_path(e, path))?;
    if value.get("graphs").is_some() {
        return dataset_from_json(&text).map_err(|e| at_path(e, path));
    }
    let g = graph_from_json(&text).map_err(|e| at_path(e, path))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Dataset::new(name, Sample::new(vec![g])?, None, Provenance::new("native-graph"))
}

fn at_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{}: {location}", path.display()),
            message,
        },
        other => other,
    }
}
