//! Serialized forms of graphs and partitions.
//!
//! The canonical graph file is a versioned JSON document:
//!
//! ```json
//! {"version":1,"nodes":[{"id":"I.1","label":"I.1"}],"edges":[["I.1","I.2"]],"theorem":"I.2"}
//! ```
//!
//! Edges are `[dependency, dependent]` pairs. `theorem` is omitted when no
//! theorem is designated. Output is compact, in node order, and ends with a
//! newline, so equal graphs serialize to equal bytes.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::communities::Partition;
use crate::error::{Error, Result};
use crate::graph::{to_edge_list, DagBuilder, ProofDag};

pub const GRAPH_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct GraphDocument {
    version: u32,
    nodes: Vec<NodeRecord>,
    edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theorem: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct NodeRecord {
    id: String,
    label: String,
}

pub fn to_json(dag: &ProofDag) -> Result<String> {
    let doc = GraphDocument {
        version: GRAPH_FORMAT_VERSION,
        nodes: dag.nodes().map(|n| NodeRecord { id: dag.id(n).to_owned(), label: dag.label(n).to_owned() }).collect(),
        edges: dag.edges().map(|(d, u)| [dag.id(d).to_owned(), dag.id(u).to_owned()]).collect(),
        theorem: dag.theorem().map(|t| dag.id(t).to_owned()),
    };
    let mut out = serde_json::to_string(&doc)?;
    out.push('\n');
    Ok(out)
}

pub fn from_json(text: &str) -> Result<ProofDag> {
    let doc: GraphDocument = serde_json::from_str(text)?;
    if doc.version != GRAPH_FORMAT_VERSION {
        return Err(Error::Format(format!(
            "unsupported graph version {} (expected {GRAPH_FORMAT_VERSION})",
            doc.version
        )));
    }
    let mut b = DagBuilder::new();
    for rec in &doc.nodes {
        if b.get(&rec.id).is_some() {
            return Err(Error::Format(format!("duplicate node id `{}`", rec.id)));
        }
        b.add_node(&rec.id, &rec.label);
    }
    for [d, u] in &doc.edges {
        let dn = b.get(d).ok_or_else(|| Error::UnknownNode(d.clone()))?;
        let un = b.get(u).ok_or_else(|| Error::UnknownNode(u.clone()))?;
        b.add_edge(dn, un);
    }
    if let Some(t) = &doc.theorem {
        let tn = b.get(t).ok_or_else(|| Error::UnknownNode(t.clone()))?;
        b.set_theorem(tn);
    }
    b.build()
}

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78",
];

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering; modules of `partition` get fill colours.
pub fn to_dot(dag: &ProofDag, partition: Option<&Partition>) -> String {
    let mut out = String::from("digraph proof {\n");
    for n in dag.nodes() {
        let _ = write!(out, "  {} [label={}", dot_quote(dag.id(n)), dot_quote(dag.label(n)));
        if let Some(m) = partition.and_then(|p| p.assignment.get(n.index()).copied().flatten()) {
            let _ = write!(out, ", style=filled, fillcolor=\"{}\", module={m}", PALETTE[m % PALETTE.len()]);
        }
        if Some(n) == dag.theorem() {
            out.push_str(", shape=doublecircle");
        }
        out.push_str("];\n");
    }
    for (d, u) in dag.edges() {
        let _ = writeln!(out, "  {} -> {};", dot_quote(dag.id(d)), dot_quote(dag.id(u)));
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Json,
    Dot,
    Edges,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(GraphFormat::Json),
            "dot" => Ok(GraphFormat::Dot),
            "edges" | "deps" => Ok(GraphFormat::Edges),
            other => Err(Error::Config(format!("unknown graph format `{other}` (expected json, dot or edges)"))),
        }
    }
}

pub fn export_graph(dag: &ProofDag, format: GraphFormat, partition: Option<&Partition>) -> Result<String> {
    match format {
        GraphFormat::Json => to_json(dag),
        GraphFormat::Dot => Ok(to_dot(dag, partition)),
        GraphFormat::Edges => to_edge_list(dag),
    }
}

#[derive(Serialize, Deserialize)]
struct PartitionDocument {
    version: u32,
    modularity: f64,
    modules: usize,
    /// node id -> module index, `null` for unassigned nodes
    assignment: BTreeMap<String, Option<usize>>,
}

pub fn partition_to_json(dag: &ProofDag, partition: &Partition) -> Result<String> {
    let doc = PartitionDocument {
        version: GRAPH_FORMAT_VERSION,
        modularity: partition.modularity,
        modules: partition.module_count(),
        assignment: dag.nodes().map(|n| (dag.id(n).to_owned(), partition.assignment[n.index()])).collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc)?;
    out.push('\n');
    Ok(out)
}

/// Reads a partition for `dag`. Nodes absent from the file are unassigned;
/// modularity is recomputed from the assignment.
pub fn partition_from_json(dag: &ProofDag, text: &str) -> Result<Partition> {
    let doc: PartitionDocument = serde_json::from_str(text)?;
    let mut assignment = vec![None; dag.node_count()];
    for (id, module) in &doc.assignment {
        let n = dag.find(id).ok_or_else(|| Error::UnknownNode(id.clone()))?;
        assignment[n.index()] = *module;
    }
    let used: HashSet<usize> = assignment.iter().flatten().copied().collect();
    if let Some(max) = used.iter().max() {
        if used.len() != max + 1 {
            return Err(Error::Format("module indices must be contiguous from 0".into()));
        }
    }
    Ok(Partition::from_assignment(dag, assignment))
}
