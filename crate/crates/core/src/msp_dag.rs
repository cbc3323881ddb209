//! The precedence DAG over maximum syncpoints.
//!
//! `X -> Z` when some path leaving an end vertex of `X` reaches an edge of
//! `Z` without first crossing an edge of any other syncpoint. In addition,
//! every backward half-syncpoint points to each forward half-syncpoint it
//! shares an edge with. Redundant edges are kept.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::bitset::BitSet;
use crate::graph::StDag;
use crate::syncpoint::{Syncpoint, SyncpointKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MspDag {
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    topo: Vec<usize>,
}

impl MspDag {
    /// Builds the DAG from explicit adjacency; `edges` may contain duplicates.
    /// Returns `None` if the edges form a cycle or reference unknown nodes.
    pub fn from_edges(nodes: usize, edges: &[(usize, usize)]) -> Option<Self> {
        let mut succ = vec![Vec::new(); nodes];
        let mut pred = vec![Vec::new(); nodes];
        for &(a, b) in edges {
            if a >= nodes || b >= nodes || a == b {
                return None;
            }
            succ[a].push(b);
            pred[b].push(a);
        }
        for list in succ.iter_mut().chain(pred.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        let topo = kahn(&succ, &pred)?;
        Some(MspDag { succ, pred, topo })
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn succ(&self, node: usize) -> &[usize] {
        &self.succ[node]
    }

    pub fn pred(&self, node: usize) -> &[usize] {
        &self.pred[node]
    }

    /// Nodes in topological order, smallest id first among ready nodes.
    pub fn topo_order(&self) -> &[usize] {
        &self.topo
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().map(move |&b| (a, b)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn sources(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.pred[v].is_empty()).collect()
    }

    pub fn targets(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.succ[v].is_empty()).collect()
    }
}

fn kahn(succ: &[Vec<usize>], pred: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut indeg: Vec<usize> = pred.iter().map(Vec::len).collect();
    let mut ready: BinaryHeap<Reverse<usize>> = (0..succ.len())
        .filter(|&v| indeg[v] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(succ.len());
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &w in &succ[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(Reverse(w));
            }
        }
    }
    (order.len() == succ.len()).then_some(order)
}

/// For every graph edge, the ids of the syncpoints containing it (at most two).
pub(crate) fn edge_membership(g: &StDag, msps: &[Syncpoint]) -> Vec<Vec<usize>> {
    let mut member = vec![Vec::new(); g.edge_count()];
    for sp in msps {
        for &(u, v) in &sp.edges {
            let e = g
                .edge_id(u as usize, v as usize)
                .expect("syncpoint edge belongs to the graph");
            member[e].push(sp.id);
        }
    }
    member
}

pub fn build_msp_dag(g: &StDag, msps: &[Syncpoint]) -> MspDag {
    let member = edge_membership(g, msps);

    // hits[v]: syncpoints whose edges are the first ones met on paths from v.
    let mut hits: Vec<BitSet> = vec![BitSet::new(msps.len()); g.len()];
    for v in (0..g.len()).rev() {
        let mut acc = BitSet::new(msps.len());
        for &z in g.succ(v) {
            let e = g.edge_id(v, z as usize).expect("adjacent");
            if member[e].is_empty() {
                acc.union_with(&hits[z as usize]);
            } else {
                for &id in &member[e] {
                    acc.insert(id);
                }
            }
        }
        hits[v] = acc;
    }

    let mut edges = Vec::new();
    for sp in msps {
        let mut reached = BitSet::new(msps.len());
        for &w in &sp.end {
            reached.union_with(&hits[w as usize]);
        }
        edges.extend(reached.iter().filter(|&z| z != sp.id).map(|z| (sp.id, z)));
    }
    for ids in &member {
        if let [a, b] = ids[..] {
            let (ka, kb) = (msps[a].kind, msps[b].kind);
            match (ka, kb) {
                (SyncpointKind::Bhsp, SyncpointKind::Fhsp) => edges.push((a, b)),
                (SyncpointKind::Fhsp, SyncpointKind::Bhsp) => edges.push((b, a)),
                _ => {}
            }
        }
    }
    MspDag::from_edges(msps.len(), &edges).expect("precedence over an acyclic graph is acyclic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::syncpoint::find_all_msps;

    #[test]
    fn w6_has_one_edge() {
        let g = fixtures::w6();
        let msps = find_all_msps(&g);
        let d = build_msp_dag(&g, &msps);
        assert_eq!(d.len(), 2);
        assert_eq!(d.edge_count(), 1);
        assert_eq!(d.sources().len(), 1);
        assert_eq!(d.targets().len(), 1);
    }

    #[test]
    fn fig6_keeps_redundant_edges() {
        let g = fixtures::fig6();
        let msps = find_all_msps(&g);
        // Emission order: E, F from out-twins; A, B, C, D from in-twins.
        let [e, f, a, b, c, d] = [0, 1, 2, 3, 4, 5];
        assert_eq!(msps[b].kind, SyncpointKind::Fhsp);
        let dag = build_msp_dag(&g, &msps);
        let mut expected = vec![
            (a, b),
            (a, c),
            (a, e),
            (b, e),
            (c, d),
            (c, e),
            (d, e),
            (d, f),
            (e, f),
        ];
        expected.sort_unstable();
        assert_eq!(dag.edges(), expected);
        assert_eq!(dag.topo_order(), &[a, b, c, d, e, f]);
    }

    #[test]
    fn half_syncpoint_overlap_adds_edge() {
        // BHSP {2,3} -> {5,6,7} and FHSP {2,3,4} -> {5,6} share {2,3} -> {5,6}.
        let g = fixtures::dag(
            &[1, 2, 3, 4, 5, 6, 7, 8],
            &[
                (1, 2),
                (1, 3),
                (1, 4),
                (2, 5),
                (2, 6),
                (2, 7),
                (3, 5),
                (3, 6),
                (3, 7),
                (4, 5),
                (4, 6),
                (5, 8),
                (6, 8),
                (7, 8),
            ],
        );
        let msps = find_all_msps(&g);
        let kinds: Vec<_> = msps.iter().map(|m| m.kind).collect();
        use SyncpointKind::*;
        assert_eq!(kinds, vec![Bhsp, Fsp, Fsp, Fhsp]);
        let dag = build_msp_dag(&g, &msps);
        assert_eq!(dag.edges(), vec![(0, 1), (0, 3), (2, 0), (2, 3), (3, 1)]);
        assert_eq!(dag.sources(), vec![2]);
        assert_eq!(dag.targets(), vec![1]);
    }
}
