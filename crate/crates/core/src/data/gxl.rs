//! GXL graphs and CXL-style index files.
//!
//! Attribute names are mapped to vector dimensions by an explicit
//! [`GxlSchema`]; anything not covered by a rule or the ignore list is an
//! error rather than silently dropped.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use rayon::prelude::*;
use roxmltree::{Document, Node, ParsingOptions};
use serde::{Deserialize, Serialize};

use super::{Dataset, Provenance};
use crate::error::{Error, Result};
use crate::frechet::Sample;
use crate::Graph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AttrRule {
    /// A numeric attribute stored at `dim`.
    Numeric { name: String, dim: usize },
    /// A categorical attribute one-hot encoded over `dim .. dim + values.len()`.
    OneHot { name: String, dim: usize, values: Vec<String> },
}

impl AttrRule {
    fn name(&self) -> &str {
        match self {
            AttrRule::Numeric { name, .. } | AttrRule::OneHot { name, .. } => name,
        }
    }

    fn span(&self) -> std::ops::Range<usize> {
        match self {
            AttrRule::Numeric { dim, .. } => *dim..dim + 1,
            AttrRule::OneHot { dim, values, .. } => *dim..dim + values.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GxlSchema {
    pub attr_dim: usize,
    #[serde(default)]
    pub node: Vec<AttrRule>,
    #[serde(default)]
    pub edge: Vec<AttrRule>,
    /// Dimension set to 1 on every edge, so attribute-less edges are not
    /// mistaken for non-edges.
    #[serde(default)]
    pub edge_presence: Option<usize>,
    /// Attribute names to skip.
    #[serde(default)]
    pub ignore: Vec<String>,
}

impl GxlSchema {
    /// Letter-style graphs: node coordinates `x`, `y` in dimensions 0 and 1,
    /// edge presence in dimension 2.
    pub fn letter() -> Self {
        Self {
            attr_dim: 3,
            node: vec![
                AttrRule::Numeric { name: "x".into(), dim: 0 },
                AttrRule::Numeric { name: "y".into(), dim: 1 },
            ],
            edge: vec![],
            edge_presence: Some(2),
            ignore: vec![],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.attr_dim == 0 {
            return Err(Error::invalid("schema attr_dim must be positive"));
        }
        for r in self.node.iter().chain(&self.edge) {
            if r.span().end > self.attr_dim || r.span().is_empty() {
                return Err(Error::invalid(format!("rule `{}` does not fit attr_dim {}", r.name(), self.attr_dim)));
            }
        }
        if self.edge_presence.is_some_and(|d| d >= self.attr_dim) {
            return Err(Error::invalid("edge_presence dimension out of range"));
        }
        Ok(())
    }
}

/// IAM-style files carry a DOCTYPE line; the external DTD is never fetched.
fn parse_xml(text: &str) -> Result<Document<'_>> {
    let opts = ParsingOptions { allow_dtd: true, ..ParsingOptions::default() };
    Document::parse_with_options(text, opts).map_err(|e| {
        let p = e.pos();
        Error::parse(format!("line {}, column {}", p.row, p.col), e.to_string())
    })
}

fn location(doc: &Document, node: Node) -> String {
    let p = doc.text_pos_at(node.range().start);
    format!("line {}, column {}", p.row, p.col)
}

/// Attribute vector of a node or edge element under `rules`.
fn attributes(doc: &Document, el: Node, rules: &[AttrRule], schema: &GxlSchema) -> Result<Vec<f64>> {
    let mut v = vec![0.0; schema.attr_dim];
    for attr in el.children().filter(|c| c.has_tag_name("attr")) {
        let at = location(doc, attr);
        let name = attr
            .attribute("name")
            .ok_or_else(|| Error::parse(&at, "attr without name"))?;
        if schema.ignore.iter().any(|n| n == name) {
            continue;
        }
        let rule = rules
            .iter()
            .find(|r| r.name() == name)
            .ok_or_else(|| Error::parse(&at, format!("unknown attribute `{name}`")))?;
        let value = attr
            .children()
            .find(Node::is_element)
            .ok_or_else(|| Error::parse(&at, format!("attribute `{name}` has no value")))?;
        let text = value.text().unwrap_or("").trim();
        match rule {
            AttrRule::Numeric { dim, .. } => {
                if !matches!(value.tag_name().name(), "float" | "double" | "int" | "long") {
                    return Err(Error::parse(&at, format!("attribute `{name}` is not numeric")));
                }
                let x: f64 = text
                    .parse()
                    .map_err(|_| Error::parse(&at, format!("`{text}` is not a number")))?;
                if !x.is_finite() {
                    return Err(Error::parse(&at, format!("attribute `{name}` is not finite")));
                }
                v[*dim] = x;
            }
            AttrRule::OneHot { dim, values, .. } => {
                let k = values
                    .iter()
                    .position(|s| s == text)
                    .ok_or_else(|| Error::parse(&at, format!("value `{text}` not declared for `{name}`")))?;
                v[dim + k] = 1.0;
            }
        }
    }
    Ok(v)
}

/// Parse a single-graph GXL document.
pub fn parse_gxl(bytes: &[u8], schema: &GxlSchema) -> Result<Graph> {
    schema.validate()?;
    let text = std::str::from_utf8(bytes).map_err(|e| Error::parse("gxl", format!("not UTF-8: {e}")))?;
    let doc = parse_xml(text)?;
    let mut graphs = doc.descendants().filter(|n| n.has_tag_name("graph"));
    let graph = graphs.next().ok_or_else(|| Error::parse("gxl", "no graph element"))?;
    if let Some(extra) = graphs.next() {
        return Err(Error::parse(location(&doc, extra), "more than one graph element"));
    }
    let directed = graph.attribute("edgemode") == Some("directed");

    let nodes: Vec<Node> = graph.children().filter(|c| c.has_tag_name("node")).collect();
    if nodes.is_empty() {
        return Err(Error::parse(location(&doc, graph), "graph has no nodes"));
    }
    let mut index = HashMap::new();
    for (i, n) in nodes.iter().enumerate() {
        let id = n
            .attribute("id")
            .ok_or_else(|| Error::parse(location(&doc, *n), "node without id"))?;
        if index.insert(id, i).is_some() {
            return Err(Error::parse(location(&doc, *n), format!("duplicate node id `{id}`")));
        }
    }
    let mut g = Graph::zeros(nodes.len(), schema.attr_dim, directed);
    for (i, n) in nodes.iter().enumerate() {
        g.set_node(i, &attributes(&doc, *n, &schema.node, schema)?)?;
    }
    for e in graph.children().filter(|c| c.has_tag_name("edge")) {
        let at = location(&doc, e);
        let end = |key: &str| -> Result<usize> {
            let id = e
                .attribute(key)
                .ok_or_else(|| Error::parse(&at, format!("edge without `{key}`")))?;
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::parse(&at, format!("edge references missing node `{id}`")))
        };
        let (i, j) = (end("from")?, end("to")?);
        if i == j {
            return Err(Error::parse(&at, "self-loop edges are not supported"));
        }
        let mut v = attributes(&doc, e, &schema.edge, schema)?;
        if let Some(d) = schema.edge_presence {
            v[d] = 1.0;
        }
        if v.iter().all(|&x| x == 0.0) {
            return Err(Error::parse(&at, "edge attribute is the zero vector; set edge_presence"));
        }
        g.set_edge(i, j, &v)?;
    }
    Ok(g)
}

/// `(file, class)` pairs of a CXL-style index, in document order.
pub fn parse_cxl(bytes: &[u8]) -> Result<Vec<(String, String)>> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::parse("index", format!("not UTF-8: {e}")))?;
    let doc = parse_xml(text)?;
    doc.descendants()
        .filter(|n| n.has_tag_name("print"))
        .map(|n| {
            let at = location(&doc, n);
            let file = n.attribute("file").ok_or_else(|| Error::parse(&at, "entry without file"))?;
            let class = n.attribute("class").ok_or_else(|| Error::parse(&at, "entry without class"))?;
            Ok((file.to_string(), class.to_string()))
        })
        .collect()
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

fn load_entries(dir: &Path, entries: &[(String, String)], schema: &GxlSchema) -> Result<Vec<Graph>> {
    entries
        .par_iter()
        .map(|(file, _)| {
            let path = dir.join(file);
            parse_gxl(&read_bytes(&path)?, schema).map_err(|e| match e {
                Error::Parse { location, message } => Error::Parse {
                    location: format!("{}: {location}", path.display()),
                    message,
                },
                other => other,
            })
        })
        .collect()
}

fn read_index(path: &Path) -> Result<Vec<(String, String)>> {
    let entries = parse_cxl(&read_bytes(path)?)?;
    if entries.is_empty() {
        return Err(Error::parse(path.display().to_string(), "index lists no graphs"));
    }
    Ok(entries)
}

/// Load every graph listed in `index` (relative to `dir`) with its class label.
pub fn load_dataset(dir: impl AsRef<Path>, index: impl AsRef<Path>, schema: &GxlSchema) -> Result<Dataset> {
    let (dir, index) = (dir.as_ref(), index.as_ref());
    let entries = read_index(index)?;
    let graphs = load_entries(dir, &entries, schema)?;
    let labels = entries.into_iter().map(|(_, c)| c).collect();
    let name = dir.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Dataset::new(
        name,
        Sample::with_labels(graphs, labels)?,
        None,
        Provenance::new("gxl").with("index", index.display()),
    )
}

/// Load several index files as named splits of one dataset, concatenated in
/// the given order.
pub fn load_split_dataset(dir: impl AsRef<Path>, splits: &[(&str, &Path)], schema: &GxlSchema) -> Result<Dataset> {
    let dir = dir.as_ref();
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    let mut members = BTreeMap::new();
    let mut prov = Provenance::new("gxl");
    for (name, index) in splits {
        let entries = read_index(index)?;
        let start = graphs.len();
        graphs.extend(load_entries(dir, &entries, schema)?);
        labels.extend(entries.into_iter().map(|(_, c)| c));
        members.insert(name.to_string(), (start..graphs.len()).collect());
        prov = prov.with(name, index.display());
    }
    let name = dir.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Dataset::new(name, Sample::with_labels(graphs, labels)?, Some(members), prov)
}
