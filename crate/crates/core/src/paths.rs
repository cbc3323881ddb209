//! All node paths of an MSP-DAG, stored per end node.
//!
//! `lists[v]` starts with the one-node path `[v]`. Nodes `u` are processed in
//! topological order; for each successor `v` the whole of `lists[u]` is copied
//! onto the end of `lists[v]` as one *batch*: every path `q` becomes `q + v`
//! and every separator `|n` becomes `|n+1`. A separator `|1` closes the batch.
//!
//! A path at position `i` of `lists[u]` has its one-node extension through
//! the batch `(v, start)` at position `start + i` of `lists[v]`. Scanning
//! right from a path of `l` nodes until the first separator `|n` with
//! `n < l` visits exactly its extensions at the front.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};
use crate::msp_dag::MspDag;

pub type PathId = usize;

/// Default limit on the number of stored paths.
pub const DEFAULT_PATH_CAP: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Path(PathId),
    Separator(u32),
}

const CHECKED: u8 = 1;
const DELETED: u8 = 2;
/// Not a candidate for checking. Kept apart from `DELETED` because lists
/// ending in forward half-syncpoints must stay navigable.
const IRRELEVANT: u8 = 4;

const NO_PREFIX: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct PathRec {
    start: u32,
    end: u32,
    prefix: u32,
    vlen: u32,
    pos: u32,
    flags: u8,
}

#[derive(Debug, Clone)]
pub struct PathStore {
    lists: Vec<Vec<Slot>>,
    paths: Vec<PathRec>,
    /// Per node `u`: `(v, start)` for the batch copied from `lists[u]` into `lists[v]`.
    batches: Vec<Vec<(u32, u32)>>,
    by_len: Vec<Vec<PathId>>,
    cursor: (usize, usize),
    append_cost: u64,
}

/// Number of paths (including one-node paths) the store would hold.
pub fn projected_path_count(dag: &MspDag) -> u128 {
    let mut ending = vec![0u128; dag.len()];
    let mut total = 0u128;
    for &v in dag.topo_order() {
        let here = dag
            .pred(v)
            .iter()
            .fold(1u128, |acc, &u| acc.saturating_add(ending[u]));
        ending[v] = here;
        total = total.saturating_add(here);
    }
    total
}

impl PathStore {
    pub fn build(dag: &MspDag, cap: u64) -> Result<Self> {
        let projected = projected_path_count(dag);
        if projected > u128::from(cap) {
            return Err(Error::ResourceCap { projected, cap });
        }
        let n = dag.len();
        let mut store = PathStore {
            lists: Vec::with_capacity(n),
            paths: Vec::with_capacity(projected as usize),
            batches: vec![Vec::new(); n],
            by_len: vec![Vec::new(), Vec::new()],
            cursor: (2, 0),
            append_cost: 0,
        };
        for v in 0..n {
            store.paths.push(PathRec {
                start: v as u32,
                end: v as u32,
                prefix: NO_PREFIX,
                vlen: 1,
                pos: 0,
                flags: 0,
            });
            store.lists.push(vec![Slot::Path(v)]);
        }
        for &u in dag.topo_order() {
            for &v in dag.succ(u) {
                store.copy_batch(u, v);
            }
        }
        for list in &store.lists {
            for slot in list {
                if let Slot::Path(p) = *slot {
                    let l = store.paths[p].vlen as usize;
                    if store.by_len.len() <= l {
                        store.by_len.resize(l + 1, Vec::new());
                    }
                    store.by_len[l].push(p);
                }
            }
        }
        Ok(store)
    }

    fn copy_batch(&mut self, u: usize, v: usize) {
        let start = self.lists[v].len();
        self.batches[u].push((v as u32, start as u32));
        let mut copied = Vec::with_capacity(self.lists[u].len() + 1);
        for i in 0..self.lists[u].len() {
            let slot = match self.lists[u][i] {
                Slot::Separator(n) => Slot::Separator(n + 1),
                Slot::Path(p) => {
                    let rec = &self.paths[p];
                    // Charged per created path: the number of nodes copied.
                    self.append_cost += u64::from(rec.vlen);
                    let id = self.paths.len();
                    self.paths.push(PathRec {
                        start: rec.start,
                        end: v as u32,
                        prefix: p as u32,
                        vlen: rec.vlen + 1,
                        pos: (start + i) as u32,
                        flags: 0,
                    });
                    Slot::Path(id)
                }
            };
            copied.push(slot);
        }
        copied.push(Slot::Separator(1));
        self.lists[v].extend(copied);
    }

    /// Hides paths whose first node cannot open a cluster or whose last node
    /// cannot close one from [`next_unchecked`](Self::next_unchecked).
    pub fn filter_relevant(&mut self, opens: &[bool], closes: &[bool]) {
        for rec in &mut self.paths {
            if !opens[rec.start as usize] || !closes[rec.end as usize] {
                rec.flags |= IRRELEVANT;
            }
        }
    }

    /// Number of stored paths, one-node paths included.
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Number of stored paths with at least one edge.
    pub fn path_count(&self) -> usize {
        self.paths.len() - self.lists.len()
    }

    /// Total number of path nodes copied while building.
    pub fn append_cost(&self) -> u64 {
        self.append_cost
    }

    pub fn list(&self, node: usize) -> &[Slot] {
        &self.lists[node]
    }

    pub fn vlen(&self, p: PathId) -> usize {
        self.paths[p].vlen as usize
    }

    pub fn start_node(&self, p: PathId) -> usize {
        self.paths[p].start as usize
    }

    pub fn end_node(&self, p: PathId) -> usize {
        self.paths[p].end as usize
    }

    pub fn nodes(&self, p: PathId) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.vlen(p));
        let mut cur = p as u32;
        while cur != NO_PREFIX {
            let rec = &self.paths[cur as usize];
            out.push(rec.end as usize);
            cur = rec.prefix;
        }
        out.reverse();
        out
    }

    pub fn is_checked(&self, p: PathId) -> bool {
        self.paths[p].flags & CHECKED != 0
    }

    pub fn is_deleted(&self, p: PathId) -> bool {
        self.paths[p].flags & DELETED != 0
    }

    pub fn is_relevant(&self, p: PathId) -> bool {
        self.paths[p].flags & IRRELEVANT == 0
    }

    pub fn ids(&self) -> core::ops::Range<PathId> {
        0..self.paths.len()
    }

    fn child(&self, p: PathId, via: (u32, u32)) -> PathId {
        let (w, start) = via;
        match self.lists[w as usize][(start + self.paths[p].pos) as usize] {
            Slot::Path(c) => c,
            Slot::Separator(_) => unreachable!("batch slots mirror their source list"),
        }
    }

    /// Locates a stored path by its node sequence.
    pub fn find(&self, nodes: &[usize]) -> Option<PathId> {
        let (&first, rest) = nodes.split_first()?;
        if first >= self.lists.len() {
            return None;
        }
        let mut cur: PathId = first;
        for &next in rest {
            let via = *self.batches[self.paths[cur].end as usize]
                .iter()
                .find(|&&(w, _)| w as usize == next)?;
            cur = self.child(cur, via);
        }
        Some(cur)
    }

    /// Paths to the right of `p` in its own list, up to the first separator
    /// that binds paths of `p`'s length.
    fn front_extensions(&self, p: PathId) -> impl Iterator<Item = PathId> + '_ {
        let rec = &self.paths[p];
        let l = rec.vlen;
        self.lists[rec.end as usize][rec.pos as usize + 1..]
            .iter()
            .take_while(move |s| !matches!(s, Slot::Separator(n) if *n < l))
            .filter_map(|s| match *s {
                Slot::Path(q) => Some(q),
                Slot::Separator(_) => None,
            })
    }

    /// Every proper superpath of `p`, found through separators and batches.
    pub fn superpaths_of(&self, p: PathId) -> Vec<PathId> {
        let mut out: Vec<PathId> = Vec::new();
        let mut stack = vec![p];
        while let Some(x) = stack.pop() {
            out.extend(self.front_extensions(x));
            for &via in &self.batches[self.paths[x].end as usize] {
                let c = self.child(x, via);
                out.push(c);
                stack.push(c);
            }
        }
        out.sort_unstable();
        out
    }

    /// Marks `p` and all its superpaths deleted. Returns how many superpaths
    /// were newly deleted (`p` itself not counted).
    pub fn delete_with_superpaths(&mut self, p: PathId) -> usize {
        self.paths[p].flags |= DELETED;
        let mut count = 0;
        let mut stack = vec![p];
        while let Some(x) = stack.pop() {
            let rec = &self.paths[x];
            let (end, pos, l) = (rec.end as usize, rec.pos as usize, rec.vlen);
            for i in pos + 1..self.lists[end].len() {
                match self.lists[end][i] {
                    Slot::Separator(n) if n < l => break,
                    Slot::Separator(_) => {}
                    Slot::Path(q) => {
                        if self.paths[q].flags & DELETED == 0 {
                            self.paths[q].flags |= DELETED;
                            count += 1;
                        }
                    }
                }
            }
            for bi in 0..self.batches[end].len() {
                let c = self.child(x, self.batches[end][bi]);
                // Superpaths of an already deleted path are deleted too.
                if self.paths[c].flags & DELETED == 0 {
                    self.paths[c].flags |= DELETED;
                    count += 1;
                    stack.push(c);
                }
            }
        }
        count
    }

    /// [`delete_with_superpaths`](Self::delete_with_superpaths) by node sequence.
    pub fn delete_superpaths(&mut self, nodes: &[usize]) -> Result<usize> {
        let p = self.find(nodes).ok_or(Error::PathNotFound)?;
        Ok(self.delete_with_superpaths(p))
    }

    /// Next relevant, undeleted, unchecked path with at least two nodes, in
    /// order of node count, then end node, then list position. The returned
    /// path is marked checked.
    pub fn next_unchecked(&mut self) -> Option<PathId> {
        let (mut len, mut idx) = self.cursor;
        while len < self.by_len.len() {
            while idx < self.by_len[len].len() {
                let p = self.by_len[len][idx];
                idx += 1;
                let flags = self.paths[p].flags;
                if flags & (CHECKED | DELETED | IRRELEVANT) == 0 {
                    self.paths[p].flags |= CHECKED;
                    self.cursor = (len, idx);
                    return Some(p);
                }
            }
            len += 1;
            idx = 0;
        }
        self.cursor = (len, idx);
        None
    }

    /// Renders `lists[node]` as `[[E],[AE] |1 [BE],...]`. Runs of separators
    /// show their smallest index; trailing separators are omitted.
    pub fn dump_list(&self, node: usize, name: impl Fn(usize) -> String) -> String {
        let mut out = String::from("[");
        let mut pending: Option<u32> = None;
        let mut first = true;
        for slot in &self.lists[node] {
            match *slot {
                Slot::Separator(n) => pending = Some(pending.map_or(n, |m| m.min(n))),
                Slot::Path(p) => {
                    match pending.take() {
                        Some(n) => {
                            let _ = write!(out, " |{n} ");
                        }
                        None if !first => out.push(','),
                        None => {}
                    }
                    first = false;
                    out.push('[');
                    for v in self.nodes(p) {
                        out.push_str(&name(v));
                    }
                    out.push(']');
                }
            }
        }
        out.push(']');
        out
    }
}

/// True iff `p` occurs as a contiguous run inside `q` and `q != p`.
pub fn is_superpath(q: &[usize], p: &[usize]) -> bool {
    q.len() > p.len() && (p.is_empty() || q.windows(p.len()).any(|w| w == p))
}
