//! Series-parallel reduction.
//!
//! A serial step merges `u` and `v` when `v` is the only successor of `u` and
//! `u` the only predecessor of `v`. A parallel step merges a set of two or
//! more vertices that share both their predecessor and successor sets. The
//! input only has to be a DAG; subgraphs with several sources or sinks are
//! reduced the same way.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::graph::{InducedSubgraph, StDag, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpStep {
    /// `(u, v)`: `v` folded into `u`. Labels are the representatives at the
    /// time of the step.
    Serial(VertexId, VertexId),
    /// Representatives merged into the first one.
    Parallel(Vec<VertexId>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpReduction {
    pub steps: Vec<SpStep>,
    /// Original vertices merged into each remaining vertex.
    pub groups: Vec<Vec<VertexId>>,
    /// Edges between remaining vertices, as indices into `groups`.
    pub edges: Vec<(usize, usize)>,
    pub fully_reduced: bool,
}

/// Mutable working graph for the reduction.
#[derive(Debug, Clone)]
struct SpGraph {
    labels: Vec<VertexId>,
    alive: Vec<bool>,
    succ: Vec<BTreeSet<u32>>,
    pred: Vec<BTreeSet<u32>>,
    members: Vec<Vec<VertexId>>,
    steps: Vec<SpStep>,
}

impl SpGraph {
    fn new(vertices: &[VertexId], edges: &[(VertexId, VertexId)]) -> Self {
        let n = vertices.len();
        let pos: BTreeMap<VertexId, u32> = vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        let mut succ = vec![BTreeSet::new(); n];
        let mut pred = vec![BTreeSet::new(); n];
        for (a, b) in edges {
            let (u, v) = (pos[a], pos[b]);
            succ[u as usize].insert(v);
            pred[v as usize].insert(u);
        }
        SpGraph {
            labels: vertices.to_vec(),
            alive: vec![true; n],
            succ,
            pred,
            members: vertices.iter().map(|&v| vec![v]).collect(),
            steps: Vec::new(),
        }
    }

    fn serial_partner(&self, u: usize) -> Option<usize> {
        if !self.alive[u] || self.succ[u].len() != 1 {
            return None;
        }
        let v = *self.succ[u].first()? as usize;
        (self.pred[v].len() == 1).then_some(v)
    }

    fn parallel_groups(&self) -> Vec<Vec<u32>> {
        let mut groups: BTreeMap<(&BTreeSet<u32>, &BTreeSet<u32>), Vec<u32>> = BTreeMap::new();
        for v in (0..self.labels.len()).filter(|&v| self.alive[v]) {
            groups
                .entry((&self.pred[v], &self.succ[v]))
                .or_default()
                .push(v as u32);
        }
        groups.into_values().filter(|g| g.len() >= 2).collect()
    }

    fn apply_serial(&mut self, u: usize, v: usize) {
        self.steps
            .push(SpStep::Serial(self.labels[u], self.labels[v]));
        let moved = core::mem::take(&mut self.members[v]);
        self.members[u].extend(moved);
        let outs = core::mem::take(&mut self.succ[v]);
        for &w in &outs {
            self.pred[w as usize].remove(&(v as u32));
            self.pred[w as usize].insert(u as u32);
        }
        self.succ[u] = outs;
        self.pred[v].clear();
        self.alive[v] = false;
    }

    fn apply_parallel(&mut self, group: &[u32]) {
        self.steps.push(SpStep::Parallel(
            group.iter().map(|&v| self.labels[v as usize]).collect(),
        ));
        let keep = group[0] as usize;
        for &x in &group[1..] {
            let x = x as usize;
            let moved = core::mem::take(&mut self.members[x]);
            self.members[keep].extend(moved);
            for p in core::mem::take(&mut self.pred[x]) {
                self.succ[p as usize].remove(&(x as u32));
            }
            for s in core::mem::take(&mut self.succ[x]) {
                self.pred[s as usize].remove(&(x as u32));
            }
            self.alive[x] = false;
        }
    }

    fn has_any_step(&self) -> bool {
        (0..self.labels.len()).any(|u| self.serial_partner(u).is_some())
            || !self.parallel_groups().is_empty()
    }

    fn reduce_greedy(&mut self) {
        loop {
            let mut changed = false;
            for u in 0..self.labels.len() {
                // Chains collapse into `u` one link at a time.
                while let Some(v) = self.serial_partner(u) {
                    self.apply_serial(u, v);
                    changed = true;
                }
            }
            for group in self.parallel_groups() {
                self.apply_parallel(&group);
                changed = true;
            }
            if !changed {
                break;
            }
        }
    }

    fn reduce_random<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        loop {
            let mut options: Vec<Result<(usize, usize), Vec<u32>>> = (0..self.labels.len())
                .filter_map(|u| self.serial_partner(u).map(|v| Ok((u, v))))
                .collect();
            for group in self.parallel_groups() {
                // Any sub-collection of two or more twins is a legal step.
                let take = rng.gen_range(2..=group.len());
                options.push(Err(group[..take].to_vec()));
            }
            if options.is_empty() {
                break;
            }
            match options.swap_remove(rng.gen_range(0..options.len())) {
                Ok((u, v)) => self.apply_serial(u, v),
                Err(group) => self.apply_parallel(&group),
            }
        }
    }

    fn finish(self) -> SpReduction {
        let remaining: Vec<usize> = (0..self.labels.len()).filter(|&v| self.alive[v]).collect();
        let slot: BTreeMap<usize, usize> = remaining.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        for &u in &remaining {
            for &w in &self.succ[u] {
                edges.push((slot[&u], slot[&(w as usize)]));
            }
        }
        let groups = remaining
            .iter()
            .map(|&v| {
                let mut g = self.members[v].clone();
                g.sort_unstable();
                g
            })
            .collect::<Vec<_>>();
        SpReduction {
            steps: self.steps,
            fully_reduced: groups.len() == 1,
            groups,
            edges,
        }
    }
}

/// Applies serial and parallel steps until none is applicable.
pub fn sp_reduce(vertices: &[VertexId], edges: &[(VertexId, VertexId)]) -> SpReduction {
    let mut g = SpGraph::new(vertices, edges);
    g.reduce_greedy();
    g.finish()
}

/// Like [`sp_reduce`], but picks every step uniformly among the applicable ones.
pub fn sp_reduce_random<R: Rng + ?Sized>(
    vertices: &[VertexId],
    edges: &[(VertexId, VertexId)],
    rng: &mut R,
) -> SpReduction {
    let mut g = SpGraph::new(vertices, edges);
    g.reduce_random(rng);
    g.finish()
}

pub fn sp_reduce_dag(g: &StDag) -> SpReduction {
    sp_reduce(&g.sorted_labels(), &g.edge_labels())
}

pub fn sp_reduce_subgraph(sub: &InducedSubgraph) -> SpReduction {
    sp_reduce(&sub.vertices, &sub.edges)
}

/// True if no serial or parallel step applies, i.e. a reduction would perform
/// zero steps.
pub fn is_irreducible(vertices: &[VertexId], edges: &[(VertexId, VertexId)]) -> bool {
    !SpGraph::new(vertices, edges).has_any_step()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::induced_subgraph_with_borders;

    #[test]
    fn diamond_reduces_to_one_vertex() {
        let r = sp_reduce_dag(&fixtures::diamond());
        assert!(r.fully_reduced);
        assert_eq!(r.groups.len(), 1);
        assert_eq!(r.groups[0].len(), 4);
        // parallel {a,b}, then two serial steps
        assert_eq!(r.steps.len(), 3);
    }

    #[test]
    fn w6_is_stuck() {
        let r = sp_reduce_dag(&fixtures::w6());
        assert!(!r.fully_reduced);
        assert!(r.steps.is_empty());
        assert_eq!(r.groups.len(), 6);
    }

    #[test]
    fn fig1_serial_and_parallel_pairs() {
        let g = fixtures::fig1();
        let r = sp_reduce_dag(&g);
        assert!(!r.fully_reduced);
        let v = |i: u32| VertexId(i);
        assert!(r.steps.contains(&SpStep::Serial(v(4), v(7))));
        assert!(r.steps.contains(&SpStep::Parallel(vec![v(8), v(9)])));

        let cluster = induced_subgraph_with_borders(&g, &[v(2), v(3), v(5), v(6)]).unwrap();
        assert!(is_irreducible(&cluster.vertices, &cluster.edges));
        let bigger =
            induced_subgraph_with_borders(&g, &[v(2), v(3), v(4), v(5), v(6), v(7)]).unwrap();
        assert!(!is_irreducible(&bigger.vertices, &bigger.edges));
    }

    #[test]
    fn disconnected_chains_reduce_fully() {
        let v = |i: u32| VertexId(i);
        let r = sp_reduce(&[v(1), v(2), v(3), v(4)], &[(v(1), v(2)), (v(3), v(4))]);
        assert!(r.fully_reduced);
    }
}
