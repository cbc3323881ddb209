//! JSON and DOT documents for graphs, syncpoints and search results.

use serde::{Deserialize, Serialize};

use mincluster_core::{
    validate_st_dag, Cluster, FindStats, GenerationRecord, MspDag, StDag, Syncpoint, VertexId,
};

use crate::dot::{parse_dot, quote, write_dot, DotGraph};
use crate::error::{CliError, CliResult};

/// `{"vertices":[..],"edges":[[u,v],..]}`, optionally with the record of the
/// generator run that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<u32>,
    pub edges: Vec<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generation: Option<GenerationDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationDoc {
    pub n: usize,
    pub parexp: f64,
    pub serexp: f64,
    pub maxwidth: usize,
    pub clustsettle: f64,
    pub narb: usize,
    pub seed: u64,
    pub vertices: usize,
    pub overshoot: usize,
    pub parallel_expansions: usize,
    pub serial_expansions: usize,
    pub subgraph_expansions: usize,
    /// In insertion order.
    pub disruptive_edges: Vec<[u32; 2]>,
    pub disruptive_attempts: usize,
}

impl From<&GenerationRecord> for GenerationDoc {
    fn from(r: &GenerationRecord) -> Self {
        GenerationDoc {
            n: r.params.n,
            parexp: r.params.parexp,
            serexp: r.params.serexp,
            maxwidth: r.params.maxwidth,
            clustsettle: r.params.clustsettle,
            narb: r.params.narb,
            seed: r.params.seed,
            vertices: r.vertices,
            overshoot: r.overshoot,
            parallel_expansions: r.expansions.parallel,
            serial_expansions: r.expansions.serial,
            subgraph_expansions: r.expansions.subgraph,
            disruptive_edges: r.disruptive_edges.iter().map(|&(u, v)| [u.0, v.0]).collect(),
            disruptive_attempts: r.disruptive_attempts,
        }
    }
}

impl GraphDoc {
    pub fn from_dag(g: &StDag) -> Self {
        GraphDoc {
            vertices: g.sorted_labels().iter().map(|v| v.0).collect(),
            edges: g.edge_labels().iter().map(|&(u, v)| [u.0, v.0]).collect(),
            generation: None,
        }
    }

    pub fn to_dag(&self) -> CliResult<StDag> {
        let vertices: Vec<VertexId> = self.vertices.iter().map(|&v| VertexId(v)).collect();
        let edges: Vec<(VertexId, VertexId)> =
            self.edges.iter().map(|&[u, v]| (VertexId(u), VertexId(v))).collect();
        Ok(validate_st_dag(&vertices, &edges)?)
    }

    pub fn to_json(&self) -> String {
        to_json_text(self).expect("graph documents serialize")
    }

    /// DOT with vertex ids as node names; the generation record, if any, rides
    /// along as a JSON `comment` attribute.
    pub fn to_dot(&self) -> String {
        let mut dot = DotGraph {
            name: Some("G".into()),
            nodes: self.vertices.iter().map(u32::to_string).collect(),
            edges: self.edges.iter().map(|[u, v]| (u.to_string(), v.to_string())).collect(),
            attrs: Vec::new(),
        };
        if let Some(meta) = &self.generation {
            dot.attrs.push((
                "comment".into(),
                serde_json::to_string(meta).expect("generation records serialize"),
            ));
        }
        write_dot(&dot)
    }

    pub fn from_dot(text: &str) -> CliResult<Self> {
        let dot = parse_dot(text)?;
        let id = |name: &str| {
            name.parse::<u32>().map_err(|_| CliError::Dot {
                line: 0,
                message: format!("node name {name:?} is not a non-negative integer"),
            })
        };
        let vertices = dot.nodes.iter().map(|n| id(n)).collect::<CliResult<Vec<_>>>()?;
        let edges = dot
            .edges
            .iter()
            .map(|(a, b)| Ok([id(a)?, id(b)?]))
            .collect::<CliResult<Vec<_>>>()?;
        let generation = dot
            .attrs
            .iter()
            .find(|(k, _)| k == "comment")
            .and_then(|(_, v)| serde_json::from_str(v).ok());
        Ok(GraphDoc {
            vertices,
            edges,
            generation,
        })
    }

    /// Reads JSON when the text starts with `{`, DOT otherwise.
    pub fn parse(text: &str) -> CliResult<Self> {
        if text.trim_start().starts_with('{') {
            Ok(serde_json::from_str(text)?)
        } else {
            Self::from_dot(text)
        }
    }
}

/// Indented JSON that keeps arrays of numbers, and arrays of such arrays, on
/// one line.
pub fn to_json_text(value: &impl Serialize) -> CliResult<String> {
    let value = serde_json::to_value(value)?;
    let mut out = String::new();
    write_json(&value, 0, &mut out);
    out.push('\n');
    Ok(out)
}

fn is_flat(v: &serde_json::Value) -> bool {
    use serde_json::Value;
    let scalar = |x: &Value| !x.is_array() && !x.is_object();
    match v {
        Value::Array(items) => items
            .iter()
            .all(|x| scalar(x) || x.as_array().is_some_and(|inner| inner.iter().all(scalar))),
        Value::Object(_) => false,
        _ => true,
    }
}

fn write_json(v: &serde_json::Value, depth: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Array(items) if !items.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_json(item, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_json(item, depth + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_json(item, depth, out);
            }
            out.push(']');
        }
        _ => out.push_str(&v.to_string()),
    }
}

fn labels(v: &[VertexId]) -> Vec<u32> {
    v.iter().map(|x| x.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MspDoc {
    pub id: usize,
    pub kind: String,
    pub edges: Vec<[u32; 2]>,
    #[serde(rename = "P")]
    pub start: Vec<u32>,
    #[serde(rename = "S")]
    pub end: Vec<u32>,
}

impl MspDoc {
    pub fn new(g: &StDag, m: &Syncpoint) -> Self {
        MspDoc {
            id: m.id,
            kind: m.kind.as_str().to_string(),
            edges: m.edge_labels(g).iter().map(|&(u, v)| [u.0, v.0]).collect(),
            start: labels(&m.start_labels(g)),
            end: labels(&m.end_labels(g)),
        }
    }
}

/// `{"msps":[..],"edges":[[i,j],..]}` with MSP ids as node ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MspDagDoc {
    pub msps: Vec<MspDoc>,
    pub edges: Vec<[usize; 2]>,
}

impl MspDagDoc {
    pub fn new(g: &StDag, msps: &[Syncpoint], dag: &MspDag) -> Self {
        MspDagDoc {
            msps: msps.iter().map(|m| MspDoc::new(g, m)).collect(),
            edges: dag.edges().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn to_dot(&self) -> String {
        let set = |xs: &[u32]| xs.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        let mut out = String::from("digraph msp_dag {\n  node [shape=box];\n");
        for m in &self.msps {
            let label = format!("{} {}\nP={{{}}}\nS={{{}}}", m.id, m.kind, set(&m.start), set(&m.end));
            out.push_str(&format!("  {} [label={}];\n", m.id, quote(&label)));
        }
        for [a, b] in &self.edges {
            out.push_str(&format!("  {a} -> {b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterDoc {
    pub vertices: Vec<u32>,
    pub entries: Vec<u32>,
    pub exits: Vec<u32>,
    pub complex: bool,
}

impl From<&Cluster> for ClusterDoc {
    fn from(c: &Cluster) -> Self {
        ClusterDoc {
            vertices: labels(&c.vertices),
            entries: labels(&c.entries),
            exits: labels(&c.exits),
            complex: c.is_complex,
        }
    }
}

/// Milliseconds per pipeline stage; `total` spans syncpoint detection through
/// cluster output and excludes reading, validating and writing files.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TimingsMs {
    pub syncpoints: f64,
    pub msp_dag: f64,
    pub paths: f64,
    pub search: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchDoc {
    pub stored_paths: usize,
    pub checked_paths: usize,
    pub cluster_checks: usize,
    pub deleted_superpaths: usize,
    pub candidates: usize,
}

impl From<&FindStats> for SearchDoc {
    fn from(s: &FindStats) -> Self {
        SearchDoc {
            stored_paths: s.stored_paths,
            checked_paths: s.checked_paths,
            cluster_checks: s.cluster_checks,
            deleted_superpaths: s.deleted_superpaths,
            candidates: s.candidates,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FindDoc {
    pub clusters: Vec<ClusterDoc>,
    pub msps: Vec<MspDoc>,
    pub msp_dag: MspDagEdges,
    /// Redundant input edges dropped before the search.
    pub removed_redundant_edges: Vec<[u32; 2]>,
    pub search: SearchDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<TimingsMs>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MspDagEdges {
    pub edges: Vec<[usize; 2]>,
    pub topo_order: Vec<usize>,
}

/// The graph in DOT with one filled box per cluster.
pub fn clusters_dot(g: &StDag, clusters: &[ClusterDoc]) -> String {
    let mut out = String::from("digraph G {\n");
    for (i, c) in clusters.iter().enumerate() {
        let kind = if c.complex { "complex" } else { "reducible" };
        out.push_str(&format!(
            "  subgraph cluster_{i} {{\n    label=\"cluster {i} ({kind})\";\n    style=filled;\n    color=lightgrey;\n"
        ));
        for v in &c.vertices {
            out.push_str(&format!("    {v};\n"));
        }
        out.push_str("  }\n");
    }
    for v in g.sorted_labels() {
        out.push_str(&format!("  {};\n", v.0));
    }
    for (u, v) in g.edge_labels() {
        out.push_str(&format!("  {} -> {};\n", u.0, v.0));
    }
    out.push_str("}\n");
    out
}
