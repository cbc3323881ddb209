//! Seeded random st-DAG generator.
//!
//! Generation starts from the chain `1 -> 2 -> 3` and repeatedly expands a
//! uniformly chosen inner vertex until the graph has at least `n` vertices:
//!
//! * parallel: the vertex gets `k - 1` twins with its predecessors and successors;
//! * serial: the vertex is split into two chained vertices;
//! * subgraph: the vertex is replaced by `k` entries and `l` exits joined by a
//!   random bipartite block.
//!
//! Finally `narb` disruptive edges are added, each chosen so the graph stays
//! acyclic and free of redundant edges. Randomness comes from
//! [`ChaCha8Rng`] seeded with [`GenParams::seed`].

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{validate_st_dag, StDag, VertexId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    /// Minimum number of vertices.
    pub n: usize,
    pub parexp: f64,
    pub serexp: f64,
    /// Upper bound for the widths `k` and `l` of parallel and subgraph expansions.
    pub maxwidth: usize,
    /// Density factor for subgraph blocks, in `(0, 1)`.
    pub clustsettle: f64,
    /// Number of disruptive edges.
    pub narb: usize,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n: 50,
            parexp: 0.33,
            serexp: 0.33,
            maxwidth: 5,
            clustsettle: 0.4,
            narb: 10,
            seed: 0,
        }
    }
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidParams(msg));
        if self.n < 3 {
            return bad(format!("n must be at least 3, got {}", self.n));
        }
        for (name, p) in [("parexp", self.parexp), ("serexp", self.serexp)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        if self.parexp + self.serexp > 1.0 + 1e-12 {
            return bad(format!(
                "parexp + serexp must not exceed 1, got {}",
                self.parexp + self.serexp
            ));
        }
        if !(self.clustsettle > 0.0 && self.clustsettle < 1.0) {
            return bad(format!("clustsettle must lie in (0, 1), got {}", self.clustsettle));
        }
        if self.maxwidth < 2 {
            return bad(format!("maxwidth must be at least 2, got {}", self.maxwidth));
        }
        Ok(())
    }

    /// Largest vertex count the expansion phase can produce.
    pub fn max_vertices(&self) -> usize {
        self.n - 1 + 2 * self.maxwidth
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExpansionCounts {
    pub parallel: usize,
    pub serial: usize,
    pub subgraph: usize,
}

/// What happened during one generation run.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub params: GenParams,
    pub vertices: usize,
    /// `vertices - n`.
    pub overshoot: usize,
    pub expansions: ExpansionCounts,
    /// Disruptive edges in insertion order.
    pub disruptive_edges: Vec<(VertexId, VertexId)>,
    pub disruptive_attempts: usize,
}

#[derive(Debug, Clone)]
pub struct GeneratedDag {
    pub dag: StDag,
    pub record: GenerationRecord,
}

/// A mutable DAG with vertex ids `1..=len`; used while generating.
#[derive(Debug, Clone)]
pub struct GenGraph {
    succ: Vec<BTreeSet<u32>>,
    pred: Vec<BTreeSet<u32>>,
    source: u32,
    target: u32,
}

impl GenGraph {
    /// The chain `1 -> 2 -> 3`.
    pub fn chain() -> Self {
        let mut g = GenGraph {
            succ: vec![BTreeSet::new(); 3],
            pred: vec![BTreeSet::new(); 3],
            source: 0,
            target: 2,
        };
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g
    }

    /// Copies a validated DAG whose labels are exactly `1..=len`.
    pub fn from_dag(dag: &StDag) -> Result<Self> {
        let n = dag.len();
        let mut g = GenGraph {
            succ: vec![BTreeSet::new(); n],
            pred: vec![BTreeSet::new(); n],
            source: 0,
            target: 0,
        };
        let slot = |v: VertexId| -> Result<u32> {
            match v.0 {
                id @ 1.. if id as usize <= n => Ok(id - 1),
                _ => Err(Error::InvalidParams(format!("label {v} outside 1..={n}"))),
            }
        };
        for (a, b) in dag.edge_labels() {
            g.add_edge(slot(a)?, slot(b)?);
        }
        g.source = slot(dag.label(dag.source()))?;
        g.target = slot(dag.label(dag.target()))?;
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(BTreeSet::len).sum()
    }

    fn add_vertex(&mut self) -> u32 {
        self.succ.push(BTreeSet::new());
        self.pred.push(BTreeSet::new());
        (self.succ.len() - 1) as u32
    }

    fn add_edge(&mut self, u: u32, v: u32) {
        self.succ[u as usize].insert(v);
        self.pred[v as usize].insert(u);
    }

    fn remove_edge(&mut self, u: u32, v: u32) {
        self.succ[u as usize].remove(&v);
        self.pred[v as usize].remove(&u);
    }

    fn id(v: u32) -> VertexId {
        VertexId(v + 1)
    }

    fn slot(&self, v: VertexId) -> u32 {
        assert!(v.0 >= 1 && (v.0 as usize) <= self.len(), "vertex {v} not in graph");
        v.0 - 1
    }

    fn is_inner(&self, v: u32) -> bool {
        v != self.source && v != self.target
    }

    /// Adds `k - 1` twins of `x`.
    pub fn expand_parallel(&mut self, x: VertexId, k: usize) {
        let x = self.slot(x);
        let preds: Vec<u32> = self.pred[x as usize].iter().copied().collect();
        let succs: Vec<u32> = self.succ[x as usize].iter().copied().collect();
        for _ in 1..k {
            let c = self.add_vertex();
            for &p in &preds {
                self.add_edge(p, c);
            }
            for &s in &succs {
                self.add_edge(c, s);
            }
        }
    }

    /// Splits `x` into `x -> x'`, where `x'` takes over the successors.
    pub fn expand_serial(&mut self, x: VertexId) {
        let x = self.slot(x);
        let c = self.add_vertex();
        let succs: Vec<u32> = self.succ[x as usize].iter().copied().collect();
        for s in succs {
            self.remove_edge(x, s);
            self.add_edge(c, s);
        }
        self.add_edge(x, c);
    }

    /// Replaces `x` by `k` entries and `l` exits; `x` keeps its id as the
    /// first entry. Returns the number of block edges.
    pub fn expand_subgraph<R: Rng + ?Sized>(
        &mut self,
        x: VertexId,
        k: usize,
        l: usize,
        clustsettle: f64,
        rng: &mut R,
    ) -> usize {
        let xi = self.slot(x);
        let preds: Vec<u32> = self.pred[xi as usize].iter().copied().collect();
        let succs: Vec<u32> = self.succ[xi as usize].iter().copied().collect();
        for &s in &succs {
            self.remove_edge(xi, s);
        }
        let mut entries = vec![xi];
        for _ in 1..k {
            let e = self.add_vertex();
            for &p in &preds {
                self.add_edge(p, e);
            }
            entries.push(e);
        }
        let mut exits = Vec::with_capacity(l);
        for _ in 0..l {
            let o = self.add_vertex();
            for &s in &succs {
                self.add_edge(o, s);
            }
            exits.push(o);
        }

        let target = block_edge_count(k, l, clustsettle, rng);
        entries.shuffle(rng);
        exits.shuffle(rng);
        let cover = k.max(l);
        let mut used = BTreeSet::new();
        for i in 0..cover {
            used.insert((i % k, i % l));
        }
        let mut spare: Vec<(usize, usize)> = (0..k)
            .flat_map(|a| (0..l).map(move |b| (a, b)))
            .filter(|pair| !used.contains(pair))
            .collect();
        spare.shuffle(rng);
        used.extend(spare.into_iter().take(target - cover));
        for &(a, b) in &used {
            self.add_edge(entries[a], exits[b]);
        }
        used.len()
    }

    fn reach_sets(&self) -> (Vec<BitSet>, Vec<BitSet>) {
        let n = self.len();
        let order = self.topo_order();
        let mut fw = vec![BitSet::new(n); n];
        let mut bw = vec![BitSet::new(n); n];
        for &v in order.iter().rev() {
            let mut set = BitSet::from_indices(n, [v as usize]);
            for &w in &self.succ[v as usize] {
                set.union_with(&fw[w as usize]);
            }
            fw[v as usize] = set;
        }
        for &v in &order {
            let mut set = BitSet::from_indices(n, [v as usize]);
            for &u in &self.pred[v as usize] {
                set.union_with(&bw[u as usize]);
            }
            bw[v as usize] = set;
        }
        (fw, bw)
    }

    fn topo_order(&self) -> Vec<u32> {
        let mut indeg: Vec<usize> = self.pred.iter().map(BTreeSet::len).collect();
        let mut ready: Vec<u32> = (0..self.len() as u32).filter(|&v| indeg[v as usize] == 0).collect();
        let mut order = Vec::with_capacity(self.len());
        while let Some(v) = ready.pop() {
            order.push(v);
            for &w in &self.succ[v as usize] {
                indeg[w as usize] -= 1;
                if indeg[w as usize] == 0 {
                    ready.push(w);
                }
            }
        }
        order
    }

    /// Whether `(u, v)` may be added without creating a cycle or a redundant
    /// edge, given reflexive reach sets.
    fn admits(&self, fw: &[BitSet], bw: &[BitSet], u: u32, v: u32) -> bool {
        let (u, v) = (u as usize, v as usize);
        if u == v || fw[u].contains(v) || fw[v].contains(u) {
            return false;
        }
        // An existing edge (a, d) with a ->* u and v ->* d would gain the
        // alternative path a ->* u -> v ->* d.
        let below = &fw[v];
        !bw[u]
            .iter()
            .any(|a| self.succ[a].iter().any(|&d| below.contains(d as usize)))
    }

    /// Checks the disruptive-edge conditions for one candidate pair.
    pub fn admits_edge(&self, u: VertexId, v: VertexId) -> bool {
        let (fw, bw) = self.reach_sets();
        self.admits(&fw, &bw, self.slot(u), self.slot(v))
    }

    /// Adds up to `count` disruptive edges drawing uniform ordered pairs, with
    /// at most `max_attempts` draws in total.
    pub fn add_disruptive_edges<R: Rng + ?Sized>(
        &mut self,
        count: usize,
        max_attempts: usize,
        rng: &mut R,
    ) -> Result<(Vec<(VertexId, VertexId)>, usize)> {
        let n = self.len();
        let (mut fw, mut bw) = self.reach_sets();
        let mut added = Vec::with_capacity(count);
        let mut attempts = 0;
        while added.len() < count {
            if attempts >= max_attempts {
                return Err(Error::DisruptiveEdgeExhausted {
                    added: added.len(),
                    requested: count,
                    attempts,
                });
            }
            attempts += 1;
            let u = rng.gen_range(0..n) as u32;
            let v = rng.gen_range(0..n) as u32;
            if !self.admits(&fw, &bw, u, v) {
                continue;
            }
            self.add_edge(u, v);
            let (down, up) = (fw[v as usize].clone(), bw[u as usize].clone());
            for a in up.iter() {
                fw[a].union_with(&down);
            }
            for d in down.iter() {
                bw[d].union_with(&up);
            }
            added.push((Self::id(u), Self::id(v)));
        }
        Ok((added, attempts))
    }

    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (Self::id(u as u32), Self::id(v))))
            .collect()
    }

    pub fn to_dag(&self) -> Result<StDag> {
        let vertices: Vec<VertexId> = (0..self.len() as u32).map(Self::id).collect();
        validate_st_dag(&vertices, &self.edges())
    }

    fn inner_vertices(&self) -> Vec<u32> {
        (0..self.len() as u32).filter(|&v| self.is_inner(v)).collect()
    }
}

/// Edge count for a `k x l` block: uniform over the integers strictly between
/// `max(k,l) + 1` and `k * l * clustsettle`, or the covering minimum
/// `max(k,l)` when no such integer exists.
pub fn block_edge_count<R: Rng + ?Sized>(k: usize, l: usize, clustsettle: f64, rng: &mut R) -> usize {
    let (lo, hi) = block_edge_bounds(k, l, clustsettle);
    if lo <= hi {
        rng.gen_range(lo..=hi)
    } else {
        k.max(l)
    }
}

/// Inclusive integer range for the block edge count; empty when `lo > hi`.
pub fn block_edge_bounds(k: usize, l: usize, clustsettle: f64) -> (usize, usize) {
    let lo = k.max(l) + 2;
    let limit = (k * l) as f64 * clustsettle;
    // Largest integer strictly below `limit`.
    let floor = limit as usize;
    let hi = if floor as f64 == limit { floor.saturating_sub(1) } else { floor };
    (lo, hi.min(k * l))
}

pub fn generate_dag(params: &GenParams) -> Result<GeneratedDag> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut g = GenGraph::chain();
    let mut counts = ExpansionCounts::default();

    while g.len() < params.n {
        let inner = g.inner_vertices();
        let x = GenGraph::id(inner[rng.gen_range(0..inner.len())]);
        let r: f64 = rng.gen();
        if r < params.parexp {
            let k = rng.gen_range(2..=params.maxwidth);
            g.expand_parallel(x, k);
            counts.parallel += 1;
        } else if r < params.parexp + params.serexp {
            g.expand_serial(x);
            counts.serial += 1;
        } else {
            let k = rng.gen_range(2..=params.maxwidth);
            let l = rng.gen_range(2..=params.maxwidth);
            g.expand_subgraph(x, k, l, params.clustsettle, &mut rng);
            counts.subgraph += 1;
        }
    }

    let (disruptive_edges, disruptive_attempts) =
        g.add_disruptive_edges(params.narb, 100 * params.narb, &mut rng)?;
    let dag = g.to_dag()?;
    Ok(GeneratedDag {
        record: GenerationRecord {
            params: *params,
            vertices: dag.len(),
            overshoot: dag.len() - params.n,
            expansions: counts,
            disruptive_edges,
            disruptive_attempts,
        },
        dag,
    })
}
