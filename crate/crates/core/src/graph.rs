//! Single-source/single-target DAGs and the structural queries the cluster
//! search is built on.
//!
//! An [`StDag`] stores its vertices in a fixed topological order: the dense
//! index of a vertex *is* its topological position, so every edge points from
//! a lower to a higher index, index `0` is the source and index `len() - 1` is
//! the target. Vertex labels ([`VertexId`]) are only used at the API boundary.

use alloc::collections::{BTreeMap, BinaryHeap};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Label of a vertex as supplied by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

/// Edge expressed in dense (topological) indices.
pub type IdxEdge = (u32, u32);

/// A validated st-DAG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StDag {
    labels: Vec<VertexId>,
    index: BTreeMap<VertexId, u32>,
    succ: Vec<Vec<u32>>,
    pred: Vec<Vec<u32>>,
    /// `edge_offset[u] + j` is the dense id of the edge to `succ[u][j]`.
    edge_offset: Vec<usize>,
}

impl StDag {
    /// Builds the graph from labels already in topological order and index
    /// edges that respect that order. Adjacency lists are sorted and deduplicated.
    fn from_ordered(labels: Vec<VertexId>, edges: impl IntoIterator<Item = IdxEdge>) -> Self {
        let n = labels.len();
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for (u, v) in edges {
            debug_assert!(u < v, "edge ({u},{v}) violates topological order");
            succ[u as usize].push(v);
            pred[v as usize].push(u);
        }
        for list in succ.iter_mut().chain(pred.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        let mut edge_offset = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for s in &succ {
            edge_offset.push(acc);
            acc += s.len();
        }
        edge_offset.push(acc);
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, i as u32))
            .collect();
        StDag {
            labels,
            index,
            succ,
            pred,
            edge_offset,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_offset[self.len()]
    }

    /// Index of the source vertex (always 0).
    pub fn source(&self) -> usize {
        0
    }

    /// Index of the target vertex (always the last index).
    pub fn target(&self) -> usize {
        self.len() - 1
    }

    pub fn label(&self, i: usize) -> VertexId {
        self.labels[i]
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    pub fn index_of(&self, v: VertexId) -> Option<usize> {
        self.index.get(&v).map(|&i| i as usize)
    }

    pub fn succ(&self, i: usize) -> &[u32] {
        &self.succ[i]
    }

    pub fn pred(&self, i: usize) -> &[u32] {
        &self.pred[i]
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.succ[i].len()
    }

    pub fn in_degree(&self, i: usize) -> usize {
        self.pred[i].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ[u].binary_search(&(v as u32)).is_ok()
    }

    /// Dense id in `[0, edge_count())` of edge `(u, v)`.
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.succ[u]
            .binary_search(&(v as u32))
            .ok()
            .map(|j| self.edge_offset[u] + j)
    }

    /// All edges in index form, ordered by (tail, head).
    pub fn edges(&self) -> impl Iterator<Item = IdxEdge> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().map(move |&v| (u as u32, v)))
    }

    /// All edges as label pairs, ordered by tail label then head label.
    pub fn edge_labels(&self) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<_> = self
            .edges()
            .map(|(u, v)| (self.labels[u as usize], self.labels[v as usize]))
            .collect();
        out.sort_unstable();
        out
    }

    /// Vertex labels in ascending label order.
    pub fn sorted_labels(&self) -> Vec<VertexId> {
        self.index.keys().copied().collect()
    }

    pub fn labels_of(&self, indices: impl IntoIterator<Item = usize>) -> Vec<VertexId> {
        let mut out: Vec<_> = indices.into_iter().map(|i| self.labels[i]).collect();
        out.sort_unstable();
        out
    }

    pub fn indices_of(&self, labels: &[VertexId]) -> Result<Vec<usize>> {
        labels
            .iter()
            .map(|&l| self.index_of(l).ok_or(Error::UnknownVertex(l)))
            .collect()
    }

    pub fn bitset_of(&self, labels: &[VertexId]) -> Result<BitSet> {
        Ok(BitSet::from_indices(self.len(), self.indices_of(labels)?))
    }
}

/// Checks the st-DAG conditions and builds the adjacency caches.
///
/// Duplicate edges are collapsed. Redundant edges are kept; see [`normalize`].
pub fn validate_st_dag(vertices: &[VertexId], edges: &[(VertexId, VertexId)]) -> Result<StDag> {
    if vertices.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    let mut position: BTreeMap<VertexId, u32> = BTreeMap::new();
    for (i, &v) in vertices.iter().enumerate() {
        if position.insert(v, i as u32).is_some() {
            return Err(Error::DuplicateVertex(v));
        }
    }
    let n = vertices.len();
    let mut succ: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        let (Some(&u), Some(&v)) = (position.get(&a), position.get(&b)) else {
            return Err(Error::DanglingEdgeEndpoint(a, b));
        };
        if u == v {
            return Err(Error::CycleDetected);
        }
        succ[u as usize].push(v);
    }
    for s in succ.iter_mut() {
        s.sort_unstable();
        s.dedup();
    }
    let mut indeg = vec![0usize; n];
    for s in &succ {
        for &v in s {
            indeg[v as usize] += 1;
        }
    }
    let sources = indeg.iter().filter(|&&d| d == 0).count();
    let targets = succ.iter().filter(|s| s.is_empty()).count();

    // Kahn's algorithm; ties broken by the smallest label for determinism.
    let mut ready: BinaryHeap<Reverse<(VertexId, u32)>> = indeg
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 0)
        .map(|(i, _)| Reverse((vertices[i], i as u32)))
        .collect();
    let mut order = Vec::with_capacity(n);
    let mut remaining = indeg;
    while let Some(Reverse((_, u))) = ready.pop() {
        order.push(u);
        for &v in &succ[u as usize] {
            remaining[v as usize] -= 1;
            if remaining[v as usize] == 0 {
                ready.push(Reverse((vertices[v as usize], v)));
            }
        }
    }
    if order.len() < n {
        return Err(Error::CycleDetected);
    }
    if sources > 1 {
        return Err(Error::MultipleSources(sources));
    }
    if targets > 1 {
        return Err(Error::MultipleTargets(targets));
    }

    let mut rank = vec![0u32; n];
    for (pos, &u) in order.iter().enumerate() {
        rank[u as usize] = pos as u32;
    }
    let labels = order.iter().map(|&u| vertices[u as usize]).collect();
    let idx_edges = succ
        .iter()
        .enumerate()
        .flat_map(|(u, s)| s.iter().map(move |&v| (u, v)))
        .map(|(u, v)| (rank[u], rank[v as usize]))
        .collect::<Vec<_>>();
    Ok(StDag::from_ordered(labels, idx_edges))
}

/// Vertex labels in topological order (the graph's internal order).
pub fn topological_order(g: &StDag) -> Vec<VertexId> {
    g.labels.clone()
}

/// Reflexive forward and backward reachability for every vertex.
#[derive(Debug, Clone)]
pub struct ReachabilityIndex {
    fw: Vec<BitSet>,
    bw: Vec<BitSet>,
}

impl ReachabilityIndex {
    /// Vertices reachable from `v` by a path of length >= 0.
    pub fn fw(&self, v: usize) -> &BitSet {
        &self.fw[v]
    }

    /// Vertices from which `v` is reachable by a path of length >= 0.
    pub fn bw(&self, v: usize) -> &BitSet {
        &self.bw[v]
    }

    pub fn reaches(&self, u: usize, v: usize) -> bool {
        self.fw[u].contains(v)
    }

    /// Union of `fw(v)` over `set`.
    pub fn fw_of(&self, set: &BitSet) -> BitSet {
        let mut out = BitSet::new(set.universe());
        self.fw_of_into(set, &mut out);
        out
    }

    /// Union of `bw(v)` over `set`.
    pub fn bw_of(&self, set: &BitSet) -> BitSet {
        let mut out = BitSet::new(set.universe());
        self.bw_of_into(set, &mut out);
        out
    }

    /// `fw_of` written into a reused buffer.
    pub fn fw_of_into(&self, set: &BitSet, out: &mut BitSet) {
        out.clear();
        for v in set.iter() {
            out.union_with(&self.fw[v]);
        }
    }

    /// `bw_of` written into a reused buffer.
    pub fn bw_of_into(&self, set: &BitSet, out: &mut BitSet) {
        out.clear();
        for v in set.iter() {
            out.union_with(&self.bw[v]);
        }
    }
}

/// One sweep in reverse topological order for forward sets and one in
/// topological order for backward sets.
pub fn build_reachability_index(g: &StDag) -> ReachabilityIndex {
    let n = g.len();
    let mut fw: Vec<BitSet> = Vec::with_capacity(n);
    for _ in 0..n {
        fw.push(BitSet::new(n));
    }
    for v in (0..n).rev() {
        let mut set = BitSet::new(n);
        set.insert(v);
        for &w in g.succ(v) {
            set.union_with(&fw[w as usize]);
        }
        fw[v] = set;
    }
    let mut bw: Vec<BitSet> = Vec::with_capacity(n);
    for v in 0..n {
        let mut set = BitSet::new(n);
        set.insert(v);
        for &u in g.pred(v) {
            set.union_with(&bw[u as usize]);
        }
        bw.push(set);
    }
    ReachabilityIndex { fw, bw }
}

/// Removes every edge `(u, v)` for which another `u -> v` path exists.
///
/// Returns the reduced graph and the removed edges (as labels).
pub fn transitive_reduction(g: &StDag) -> (StDag, Vec<(VertexId, VertexId)>) {
    let reach = build_reachability_index(g);
    let n = g.len();
    let mut kept = Vec::with_capacity(g.edge_count());
    let mut removed = Vec::new();
    let mut covered = BitSet::new(n);
    for u in 0..n {
        covered.clear();
        // Successors ascend in topological order, so anything that could
        // reach `v` has been folded into `covered` before `v` is examined.
        for &v in g.succ(u) {
            if covered.contains(v as usize) {
                removed.push((g.label(u), g.label(v as usize)));
            } else {
                kept.push((u as u32, v));
                covered.union_with(reach.fw(v as usize));
            }
        }
    }
    removed.sort_unstable();
    (StDag::from_ordered(g.labels.clone(), kept), removed)
}

/// How [`normalize`] treats redundant edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RedundancyPolicy {
    /// Remove redundant edges and report them.
    #[default]
    Reduce,
    /// Reject the graph on the first redundant edge.
    Strict,
}

#[derive(Debug, Clone)]
pub struct Normalized {
    pub dag: StDag,
    /// Redundant edges that were dropped; non-empty means the input was altered.
    pub removed: Vec<(VertexId, VertexId)>,
}

pub fn normalize(g: StDag, policy: RedundancyPolicy) -> Result<Normalized> {
    let (reduced, removed) = transitive_reduction(&g);
    if removed.is_empty() {
        return Ok(Normalized {
            dag: g,
            removed,
        });
    }
    match policy {
        RedundancyPolicy::Strict => Err(Error::RedundantEdge(removed[0].0, removed[0].1)),
        RedundancyPolicy::Reduce => Ok(Normalized {
            dag: reduced,
            removed,
        }),
    }
}

/// Maximal groups (size >= 2) of vertices sharing a predecessor set
/// (`in_twins`) or a successor set (`out_twins`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinPartition {
    pub in_twins: Vec<Vec<VertexId>>,
    pub out_twins: Vec<Vec<VertexId>>,
}

/// Twin classes in dense indices; each class ascending, classes ordered by
/// their smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct TwinClasses {
    pub in_twins: Vec<Vec<u32>>,
    pub out_twins: Vec<Vec<u32>>,
}

fn group_by_neighbours<'a>(lists: impl Iterator<Item = &'a [u32]>) -> Vec<Vec<u32>> {
    // Sorted adjacency lists are canonical keys, so map equality is set equality.
    let mut groups: BTreeMap<&[u32], Vec<u32>> = BTreeMap::new();
    for (v, key) in lists.enumerate() {
        groups.entry(key).or_default().push(v as u32);
    }
    let mut classes: Vec<Vec<u32>> = groups.into_values().filter(|c| c.len() >= 2).collect();
    classes.sort_unstable_by_key(|c| c[0]);
    classes
}

pub(crate) fn twin_classes_idx(g: &StDag) -> TwinClasses {
    TwinClasses {
        in_twins: group_by_neighbours(g.pred.iter().map(Vec::as_slice)),
        out_twins: group_by_neighbours(g.succ.iter().map(Vec::as_slice)),
    }
}

pub fn twin_classes(g: &StDag) -> TwinPartition {
    let tc = twin_classes_idx(g);
    let relabel = |classes: Vec<Vec<u32>>| {
        let mut out: Vec<Vec<VertexId>> = classes
            .into_iter()
            .map(|c| g.labels_of(c.into_iter().map(|i| i as usize)))
            .collect();
        out.sort_unstable();
        out
    };
    TwinPartition {
        in_twins: relabel(tc.in_twins),
        out_twins: relabel(tc.out_twins),
    }
}

/// The maximal subgraph on a vertex set together with its border vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
    /// Vertices with a predecessor outside the set, or the graph source.
    pub entries: Vec<VertexId>,
    /// Vertices with a successor outside the set, or the graph target.
    pub exits: Vec<VertexId>,
}

pub fn induced_subgraph_with_borders(g: &StDag, vset: &[VertexId]) -> Result<InducedSubgraph> {
    if vset.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    let members = g.bitset_of(vset)?;
    Ok(induced_subgraph_idx(g, &members))
}

pub(crate) fn induced_subgraph_idx(g: &StDag, members: &BitSet) -> InducedSubgraph {
    let mut edges = Vec::new();
    let mut entries = Vec::new();
    let mut exits = Vec::new();
    for v in members.iter() {
        if v == g.source() || g.pred(v).iter().any(|&u| !members.contains(u as usize)) {
            entries.push(v);
        }
        if v == g.target() || g.succ(v).iter().any(|&w| !members.contains(w as usize)) {
            exits.push(v);
        }
        for &w in g.succ(v) {
            if members.contains(w as usize) {
                edges.push((g.label(v), g.label(w as usize)));
            }
        }
    }
    edges.sort_unstable();
    InducedSubgraph {
        vertices: g.labels_of(members.iter()),
        edges,
        entries: g.labels_of(entries),
        exits: g.labels_of(exits),
    }
}
