//! Syncpoint classification and detection of all maximum syncpoints.
//!
//! A syncpoint is an edge set running from a start set `P` to an end set `S`
//! that contains every edge from `P` to `S`. Condition *a* asks that every
//! vertex of `S` has exactly `P` as its predecessor set, condition *b* that
//! every vertex of `P` has exactly `S` as its successor set.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::{twin_classes_idx, IdxEdge, StDag, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SyncpointKind {
    /// Full syncpoint: conditions a and b.
    Fsp,
    /// Forward half-syncpoint: condition a only, `|S| >= 2`.
    Fhsp,
    /// Backward half-syncpoint: condition b only, `|P| >= 2`.
    Bhsp,
    /// One edge whose tail has out-degree 1 and whose head has in-degree 1.
    Sp11,
}

impl SyncpointKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SyncpointKind::Fsp => "FSP",
            SyncpointKind::Fhsp => "FHSP",
            SyncpointKind::Bhsp => "BHSP",
            SyncpointKind::Sp11 => "11SP",
        }
    }

    /// Accepts the names produced by [`as_str`](Self::as_str), case-insensitively,
    /// plus `SP11`.
    pub fn parse(s: &str) -> Option<Self> {
        let is = |name: &str| s.eq_ignore_ascii_case(name);
        if is("FSP") {
            Some(Self::Fsp)
        } else if is("FHSP") {
            Some(Self::Fhsp)
        } else if is("BHSP") {
            Some(Self::Bhsp)
        } else if is("11SP") || is("SP11") {
            Some(Self::Sp11)
        } else {
            None
        }
    }
}

impl fmt::Display for SyncpointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A maximum syncpoint of a specific [`StDag`]. Vertex references are dense
/// indices of that graph; use the `*_labels` accessors at API boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syncpoint {
    pub id: usize,
    pub kind: SyncpointKind,
    /// Sorted edges from `start` to `end`.
    pub edges: Vec<IdxEdge>,
    /// Start vertex set `P`, ascending.
    pub start: Vec<u32>,
    /// End vertex set `S`, ascending.
    pub end: Vec<u32>,
}

impl Syncpoint {
    fn between(g: &StDag, kind: SyncpointKind, start: Vec<u32>, end: Vec<u32>) -> Self {
        let mut edges = Vec::new();
        for &u in &start {
            for &v in g.succ(u as usize) {
                if end.binary_search(&v).is_ok() {
                    edges.push((u, v));
                }
            }
        }
        Syncpoint {
            id: 0,
            kind,
            edges,
            start,
            end,
        }
    }

    pub fn start_labels(&self, g: &StDag) -> Vec<VertexId> {
        g.labels_of(self.start.iter().map(|&v| v as usize))
    }

    pub fn end_labels(&self, g: &StDag) -> Vec<VertexId> {
        g.labels_of(self.end.iter().map(|&v| v as usize))
    }

    /// The syncpoint whose end set can hold the entries of a cluster: itself,
    /// or for a backward half-syncpoint the forward half-syncpoint into the
    /// end vertices fed by exactly its start set, if there are two of them.
    pub fn opening_bracket(&self, g: &StDag) -> Option<Syncpoint> {
        if self.kind != SyncpointKind::Bhsp {
            return Some(self.clone());
        }
        let end: Vec<u32> = self
            .end
            .iter()
            .copied()
            .filter(|&v| g.pred(v as usize) == self.start.as_slice())
            .collect();
        (end.len() >= 2).then(|| Syncpoint {
            id: self.id,
            ..Syncpoint::between(g, SyncpointKind::Fhsp, self.start.clone(), end)
        })
    }

    /// Mirror of [`opening_bracket`](Self::opening_bracket) for cluster exits.
    pub fn closing_bracket(&self, g: &StDag) -> Option<Syncpoint> {
        if self.kind != SyncpointKind::Fhsp {
            return Some(self.clone());
        }
        let start: Vec<u32> = self
            .start
            .iter()
            .copied()
            .filter(|&u| g.succ(u as usize) == self.end.as_slice())
            .collect();
        (start.len() >= 2).then(|| Syncpoint {
            id: self.id,
            ..Syncpoint::between(g, SyncpointKind::Bhsp, start, self.end.clone())
        })
    }

    pub fn edge_labels(&self, g: &StDag) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| (g.label(u as usize), g.label(v as usize)))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Outcome of evaluating the syncpoint conditions on an arbitrary edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncConditions {
    pub start: Vec<VertexId>,
    pub end: Vec<VertexId>,
    /// The set holds every edge of the graph from `start` to `end`.
    pub complete: bool,
    pub cond_a: bool,
    pub cond_b: bool,
}

impl SyncConditions {
    pub fn kind(&self) -> Option<SyncpointKind> {
        if !self.complete {
            return None;
        }
        match (self.cond_a, self.cond_b) {
            (true, true) if self.start.len() == 1 && self.end.len() == 1 => Some(SyncpointKind::Sp11),
            (true, true) => Some(SyncpointKind::Fsp),
            (true, false) if self.end.len() >= 2 => Some(SyncpointKind::Fhsp),
            (false, true) if self.start.len() >= 2 => Some(SyncpointKind::Bhsp),
            _ => None,
        }
    }
}

/// Evaluates completeness and conditions a and b on `edges`.
pub fn syncpoint_conditions(g: &StDag, edges: &[(VertexId, VertexId)]) -> Result<SyncConditions> {
    if edges.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let mut start = Vec::new();
    let mut end = Vec::new();
    let mut idx_edges = Vec::with_capacity(edges.len());
    for &(a, b) in edges {
        let (u, v) = match (g.index_of(a), g.index_of(b)) {
            (Some(u), Some(v)) if g.has_edge(u, v) => (u as u32, v as u32),
            _ => return Err(Error::EdgeNotInGraph(a, b)),
        };
        idx_edges.push((u, v));
        start.push(u);
        end.push(v);
    }
    start.sort_unstable();
    start.dedup();
    end.sort_unstable();
    end.dedup();
    idx_edges.sort_unstable();
    idx_edges.dedup();

    let expected: usize = start
        .iter()
        .map(|&u| {
            g.succ(u as usize)
                .iter()
                .filter(|v| end.binary_search(v).is_ok())
                .count()
        })
        .sum();
    let cond_a = end.iter().all(|&v| g.pred(v as usize) == start.as_slice());
    let cond_b = start.iter().all(|&u| g.succ(u as usize) == end.as_slice());
    Ok(SyncConditions {
        start: g.labels_of(start.iter().map(|&v| v as usize)),
        end: g.labels_of(end.iter().map(|&v| v as usize)),
        complete: expected == idx_edges.len(),
        cond_a,
        cond_b,
    })
}

/// Classifies `edges` as a syncpoint, or `None` if it is not one.
pub fn is_syncpoint(g: &StDag, edges: &[(VertexId, VertexId)]) -> Result<Option<SyncpointKind>> {
    Ok(syncpoint_conditions(g, edges)?.kind())
}

fn all_equal(lists: impl IntoIterator<Item = impl PartialEq>) -> bool {
    let mut it = lists.into_iter();
    match it.next() {
        Some(first) => it.all(|l| l == first),
        None => true,
    }
}

/// All maximum syncpoints, ids assigned in emission order.
pub fn find_all_msps(g: &StDag) -> Vec<Syncpoint> {
    let twins = twin_classes_idx(g);
    let mut out = Vec::new();

    for class in &twins.out_twins {
        let p_size = class.len();
        let end = g.succ(class[0] as usize).to_vec();
        let same_preds = all_equal(end.iter().map(|&v| g.pred(v as usize)));
        let in_deg_ok = end.iter().all(|&v| g.in_degree(v as usize) == p_size);
        let kind = if (same_preds || end.len() == 1) && in_deg_ok {
            SyncpointKind::Fsp
        } else if same_preds && end.len() >= 2 {
            // `end` is a whole in-twin class with further predecessors; the
            // forward half-syncpoint into it contains these edges.
            continue;
        } else {
            SyncpointKind::Bhsp
        };
        out.push(Syncpoint::between(g, kind, class.clone(), end));
    }

    for class in &twins.in_twins {
        let s_size = class.len();
        let start = g.pred(class[0] as usize).to_vec();
        let out_deg_ok = start.iter().all(|&u| g.out_degree(u as usize) == s_size);
        let start_are_out_twins =
            start.len() >= 2 && all_equal(start.iter().map(|&u| g.succ(u as usize)));
        if start_are_out_twins {
            // Either the FSP from the out-twin loop, or a proper part of the
            // backward half-syncpoint leaving `start`.
            continue;
        }
        let kind = if start.len() == 1 && out_deg_ok {
            SyncpointKind::Fsp
        } else {
            SyncpointKind::Fhsp
        };
        out.push(Syncpoint::between(g, kind, start, class.clone()));
    }

    for u in 0..g.len() {
        if let [v] = g.succ(u) {
            if g.in_degree(*v as usize) == 1 {
                out.push(Syncpoint::between(
                    g,
                    SyncpointKind::Sp11,
                    alloc::vec![u as u32],
                    alloc::vec![*v],
                ));
            }
        }
    }

    for (id, sp) in out.iter_mut().enumerate() {
        sp.id = id;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::fixtures::{self, A, B, C, D, S, T};

    fn kinds(msps: &[Syncpoint]) -> Vec<SyncpointKind> {
        msps.iter().map(|m| m.kind).collect()
    }

    #[test]
    fn predicate_on_w6() {
        let g = fixtures::w6();
        assert_eq!(is_syncpoint(&g, &[(S, A), (S, B)]), Ok(Some(SyncpointKind::Fsp)));
        assert_eq!(is_syncpoint(&g, &[(A, C)]), Ok(None));
        // b -> d alone misses a -> d, so condition a fails for d.
        assert_eq!(is_syncpoint(&g, &[(B, D)]), Ok(None));
        assert_eq!(
            is_syncpoint(&g, &[(S, T)]),
            Err(Error::EdgeNotInGraph(S, T))
        );
        assert_eq!(is_syncpoint(&g, &[]), Err(Error::EmptyEdgeSet));
    }

    #[test]
    fn incomplete_edge_set_is_rejected() {
        let g = fixtures::w6();
        // {a,b} -> {d} is complete; {a} -> {c,d} without a -> c is not.
        assert_eq!(is_syncpoint(&g, &[(A, D), (B, D)]), Ok(None));
        let c = syncpoint_conditions(&g, &[(A, D), (B, D)]).unwrap();
        assert!(c.complete && c.cond_a && !c.cond_b);
    }

    #[test]
    fn chain_gives_two_11sps() {
        let g = fixtures::chain3();
        let msps = find_all_msps(&g);
        assert_eq!(kinds(&msps), vec![SyncpointKind::Sp11, SyncpointKind::Sp11]);
        assert_eq!(msps[0].edge_labels(&g), vec![(S, A)]);
        assert_eq!(is_syncpoint(&g, &[(S, A)]), Ok(Some(SyncpointKind::Sp11)));
    }

    #[test]
    fn w6_has_two_fsps() {
        let g = fixtures::w6();
        let msps = find_all_msps(&g);
        assert_eq!(kinds(&msps), vec![SyncpointKind::Fsp, SyncpointKind::Fsp]);
        let mut sets: Vec<_> = msps.iter().map(|m| m.edge_labels(&g)).collect();
        sets.sort();
        assert_eq!(sets, vec![vec![(S, A), (S, B)], vec![(C, T), (D, T)]]);
    }

    #[test]
    fn fig1_omits_the_subsyncpoint_bhsp() {
        let g = fixtures::fig1();
        let v = VertexId;
        let sub = [(v(5), v(8)), (v(5), v(9)), (v(6), v(8)), (v(6), v(9))];
        assert_eq!(is_syncpoint(&g, &sub), Ok(Some(SyncpointKind::Bhsp)));
        let msps = find_all_msps(&g);
        assert!(msps.iter().all(|m| m.edge_labels(&g) != sub));
        assert_eq!(msps.len(), 4);
        for m in &msps {
            assert_eq!(is_syncpoint(&g, &m.edge_labels(&g)), Ok(Some(m.kind)));
        }
    }

    #[test]
    fn half_syncpoints_are_emitted() {
        let v = VertexId;
        // {4,5} share predecessors {2,3}, but 3 also feeds 6.
        let g = fixtures::dag(
            &[1, 2, 3, 4, 5, 6, 7],
            &[(1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (3, 5), (3, 6), (4, 7), (5, 7), (6, 7)],
        );
        let msps = find_all_msps(&g);
        assert_eq!(
            kinds(&msps),
            vec![SyncpointKind::Fsp, SyncpointKind::Fsp, SyncpointKind::Fhsp]
        );
        assert_eq!(
            msps[2].edge_labels(&g),
            vec![(v(2), v(4)), (v(2), v(5)), (v(3), v(4)), (v(3), v(5))]
        );

        // The mirror image: {3,4} share successors {5,6}, but 2 also feeds 5.
        let g = fixtures::dag(
            &[1, 2, 3, 4, 5, 6, 7],
            &[(1, 2), (1, 3), (1, 4), (2, 5), (3, 5), (3, 6), (4, 5), (4, 6), (5, 7), (6, 7)],
        );
        let msps = find_all_msps(&g);
        assert_eq!(
            kinds(&msps),
            vec![SyncpointKind::Bhsp, SyncpointKind::Fsp, SyncpointKind::Fsp]
        );
        assert_eq!(msps[0].start_labels(&g), vec![v(3), v(4)]);
        assert_eq!(msps[0].end_labels(&g), vec![v(5), v(6)]);
    }

    #[test]
    fn contained_half_syncpoint_is_only_a_bracket() {
        // {2,3} -> {5,6} is a forward half-syncpoint, but it lies inside the
        // backward half-syncpoint {2,3} -> {5,6,7}.
        let v = VertexId;
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
                (4, 7),
                (5, 8),
                (6, 8),
                (7, 8),
            ],
        );
        let inner = [(v(2), v(5)), (v(2), v(6)), (v(3), v(5)), (v(3), v(6))];
        assert_eq!(is_syncpoint(&g, &inner), Ok(Some(SyncpointKind::Fhsp)));
        let msps = find_all_msps(&g);
        use SyncpointKind::*;
        assert_eq!(kinds(&msps), vec![Bhsp, Fsp, Fsp]);
        let opening = msps[0].opening_bracket(&g).unwrap();
        assert_eq!(opening.kind, Fhsp);
        assert_eq!(opening.id, 0);
        assert_eq!(opening.edge_labels(&g), inner.to_vec());
        assert_eq!(msps[0].closing_bracket(&g), Some(msps[0].clone()));
    }
}
