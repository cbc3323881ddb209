//! Exhaustive reference implementations for small graphs.
//!
//! Everything here is deliberately naive: clusters come from scanning every
//! vertex subset, paths from plain depth-first enumeration.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{StDag, VertexId};

/// Largest graph the exhaustive searches accept.
pub const ORACLE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleCluster {
    pub vertices: Vec<VertexId>,
    pub entries: Vec<VertexId>,
    pub exits: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub all_clusters: Vec<OracleCluster>,
    /// Members of `all_clusters` that contain no other member.
    pub minimal_clusters: Vec<OracleCluster>,
}

fn check_size(n: usize) -> Result<()> {
    if n > ORACLE_LIMIT {
        Err(Error::TooLarge {
            vertices: n,
            limit: ORACLE_LIMIT,
        })
    } else {
        Ok(())
    }
}

fn labels(g: &StDag, mask: u32) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = (0..g.len())
        .filter(|&v| mask & (1 << v) != 0)
        .map(|v| g.label(v))
        .collect();
    out.sort_unstable();
    out
}

fn all_same(masks: &[u32], members: u32) -> bool {
    let mut it = (0..32).filter(|&v| members & (1 << v) != 0).map(|v| masks[v]);
    match it.next() {
        Some(first) => it.all(|m| m == first),
        None => true,
    }
}

fn cluster_masks(g: &StDag) -> Result<Vec<(u32, u32, u32)>> {
    let n = g.len();
    check_size(n)?;
    let mask_of = |list: &[u32]| list.iter().fold(0u32, |m, &v| m | (1 << v));
    let preds: Vec<u32> = (0..n).map(|v| mask_of(g.pred(v))).collect();
    let succs: Vec<u32> = (0..n).map(|v| mask_of(g.succ(v))).collect();
    let mut found = Vec::new();
    for set in 1u32..(1u32 << n) {
        let mut entries = 0u32;
        let mut exits = 0u32;
        for v in 0..n {
            if set & (1 << v) == 0 {
                continue;
            }
            if v == g.source() || preds[v] & !set != 0 {
                entries |= 1 << v;
            }
            if v == g.target() || succs[v] & !set != 0 {
                exits |= 1 << v;
            }
        }
        if entries.count_ones() >= 2
            && exits.count_ones() >= 2
            && entries & exits == 0
            && all_same(&preds, entries)
            && all_same(&succs, exits)
        {
            found.push((set, entries, exits));
        }
    }
    Ok(found)
}

pub fn oracle_report(g: &StDag) -> Result<OracleReport> {
    let masks = cluster_masks(g)?;
    let to_cluster = |&(set, a, b): &(u32, u32, u32)| OracleCluster {
        vertices: labels(g, set),
        entries: labels(g, a),
        exits: labels(g, b),
    };
    let minimal: Vec<OracleCluster> = masks
        .iter()
        .filter(|&&(set, _, _)| {
            !masks
                .iter()
                .any(|&(other, _, _)| other != set && other & set == other)
        })
        .map(to_cluster)
        .collect();
    let mut all: Vec<OracleCluster> = masks.iter().map(to_cluster).collect();
    all.sort_unstable_by(|a, b| a.vertices.cmp(&b.vertices));
    let mut minimal = minimal;
    minimal.sort_unstable_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(OracleReport {
        all_clusters: all,
        minimal_clusters: minimal,
    })
}

/// Vertex sets of all clusters, sorted.
pub fn oracle_all_clusters(g: &StDag) -> Result<Vec<Vec<VertexId>>> {
    Ok(oracle_report(g)?
        .all_clusters
        .into_iter()
        .map(|c| c.vertices)
        .collect())
}

/// Vertex sets of all clusters containing no other cluster, sorted.
pub fn oracle_minimal_clusters(g: &StDag) -> Result<Vec<Vec<VertexId>>> {
    Ok(oracle_report(g)?
        .minimal_clusters
        .into_iter()
        .map(|c| c.vertices)
        .collect())
}

/// Every path with at least one edge, by depth-first search from each node.
pub fn oracle_all_paths(succ: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    check_size(succ.len())?;
    fn extend(succ: &[Vec<usize>], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().expect("nonempty");
        for &w in &succ[last] {
            path.push(w);
            out.push(path.clone());
            extend(succ, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for v in 0..succ.len() {
        extend(succ, &mut vec![v], &mut out);
    }
    Ok(out)
}

pub fn oracle_count_paths(succ: &[Vec<usize>]) -> Result<usize> {
    Ok(oracle_all_paths(succ)?.len())
}

/// Indices into `paths` of the proper superpaths of `p`.
pub fn oracle_superpaths(paths: &[Vec<usize>], p: &[usize]) -> Vec<usize> {
    paths
        .iter()
        .enumerate()
        .filter(|(_, q)| q.len() > p.len() && q.windows(p.len().max(1)).any(|w| w == p))
        .map(|(i, _)| i)
        .collect()
}
