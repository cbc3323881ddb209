//! Minimal cluster search between pairs of maximum syncpoints.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{build_reachability_index, induced_subgraph_idx, ReachabilityIndex, StDag, VertexId};
use crate::msp_dag::{build_msp_dag, MspDag};
use crate::paths::{PathStore, DEFAULT_PATH_CAP};
use crate::sp::is_irreducible;
use crate::syncpoint::{find_all_msps, Syncpoint};

/// A cluster with its border sets, all as labels in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub vertices: Vec<VertexId>,
    pub entries: Vec<VertexId>,
    pub exits: Vec<VertexId>,
    pub is_complex: bool,
    /// Syncpoint ids bracketing the cluster, when found by the search.
    pub opening_msp: Option<usize>,
    pub closing_msp: Option<usize>,
}

/// One seed of the forward-backward scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedRun {
    pub seed: usize,
    /// `(xset, yset)` after every round, in order; the last entry is stable.
    pub history: Vec<(BitSet, BitSet)>,
    /// Vertices between the final sets, if that region is closed.
    pub closed: Option<BitSet>,
}

impl SeedRun {
    pub fn xset(&self) -> &BitSet {
        &self.history.last().expect("at least one round").0
    }

    pub fn yset(&self) -> &BitSet {
        &self.history.last().expect("at least one round").1
    }

    /// Closed, with at least two entries and two exits.
    pub fn cluster(&self) -> Option<&BitSet> {
        self.closed
            .as_ref()
            .filter(|_| self.xset().count() >= 2 && self.yset().count() >= 2)
    }
}

/// Vertices of `FwReach(xset) ∩ BwReach(yset)` if that region can only be
/// entered through `xset` and left through `yset`.
pub fn closed_region(g: &StDag, reach: &ReachabilityIndex, xset: &BitSet, yset: &BitSet) -> Option<BitSet> {
    let mut region = reach.fw_of(xset);
    region.intersect_with(&reach.bw_of(yset));
    if region.is_empty() {
        return None;
    }
    for v in region.iter() {
        if !xset.contains(v) && g.pred(v).iter().any(|&u| !region.contains(u as usize)) {
            return None;
        }
        if !yset.contains(v) && g.succ(v).iter().any(|&w| !region.contains(w as usize)) {
            return None;
        }
    }
    Some(region)
}

pub fn closed_check(g: &StDag, reach: &ReachabilityIndex, xset: &BitSet, yset: &BitSet) -> bool {
    closed_region(g, reach, xset, yset).is_some()
}

/// Runs the forward-backward scheme from every uncovered end vertex of
/// `opening` toward the start vertices of `closing`.
pub fn cluster_check(g: &StDag, reach: &ReachabilityIndex, opening: &Syncpoint, closing: &Syncpoint) -> Vec<SeedRun> {
    seed_runs(g, reach, opening, closing, true)
}

/// With `full_history` off, each run keeps only its stable round.
fn seed_runs(
    g: &StDag,
    reach: &ReachabilityIndex,
    opening: &Syncpoint,
    closing: &Syncpoint,
    full_history: bool,
) -> Vec<SeedRun> {
    let n = g.len();
    let ends = BitSet::from_indices(n, opening.end.iter().map(|&v| v as usize));
    let starts = BitSet::from_indices(n, closing.start.iter().map(|&v| v as usize));
    let mut covered = BitSet::new(n);
    let mut ynew = BitSet::new(n);
    let mut xnew = BitSet::new(n);
    let mut runs = Vec::new();
    while let Some(seed) = opening
        .end
        .iter()
        .map(|&v| v as usize)
        .find(|&v| !covered.contains(v))
    {
        let mut xset = BitSet::from_indices(n, [seed]);
        let mut yset = BitSet::new(n);
        let mut history = Vec::new();
        loop {
            reach.fw_of_into(&xset, &mut ynew);
            ynew.intersect_with(&starts);
            if ynew.is_empty() {
                xnew.clone_from(&xset);
            } else {
                reach.bw_of_into(&ynew, &mut xnew);
                xnew.intersect_with(&ends);
            }
            let stable = xnew == xset && ynew == yset;
            core::mem::swap(&mut xset, &mut xnew);
            core::mem::swap(&mut yset, &mut ynew);
            if full_history || stable {
                history.push((xset.clone(), yset.clone()));
            }
            if stable {
                break;
            }
        }
        covered.union_with(&xset);
        let closed = if yset.is_empty() {
            None
        } else {
            closed_region(g, reach, &xset, &yset)
        };
        runs.push(SeedRun {
            seed,
            history,
            closed,
        });
    }
    runs
}

/// Checks the cluster definition on `vset` and returns its entry and exit sets.
pub fn cluster_borders(g: &StDag, vset: &[VertexId]) -> Result<(Vec<VertexId>, Vec<VertexId>)> {
    if vset.is_empty() {
        return Err(Error::EmptyVertexSet);
    }
    let members = g.bitset_of(vset)?;
    let sub = induced_subgraph_idx(g, &members);
    let (entries, exits) = (sub.entries, sub.exits);
    if entries.len() < 2 {
        return Err(Error::NotACluster("fewer than two entry vertices"));
    }
    if exits.len() < 2 {
        return Err(Error::NotACluster("fewer than two exit vertices"));
    }
    if entries.iter().any(|v| exits.binary_search(v).is_ok()) {
        return Err(Error::NotACluster("entry and exit sets overlap"));
    }
    let idx = |v: &VertexId| g.index_of(*v).expect("member");
    let first_pred = g.pred(idx(&entries[0]));
    if entries.iter().any(|v| g.pred(idx(v)) != first_pred) {
        return Err(Error::NotACluster("entry vertices are not in-twins"));
    }
    let first_succ = g.succ(idx(&exits[0]));
    if exits.iter().any(|v| g.succ(idx(v)) != first_succ) {
        return Err(Error::NotACluster("exit vertices are not out-twins"));
    }
    Ok((entries, exits))
}

/// Validates `vset` as a cluster and decides whether it is complex.
pub fn classify_cluster(g: &StDag, vset: &[VertexId]) -> Result<Cluster> {
    let (entries, exits) = cluster_borders(g, vset)?;
    let members = g.bitset_of(vset)?;
    let sub = induced_subgraph_idx(g, &members);
    Ok(Cluster {
        is_complex: is_irreducible(&sub.vertices, &sub.edges),
        vertices: sub.vertices,
        entries,
        exits,
        opening_msp: None,
        closing_msp: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FindConfig {
    /// Upper bound on stored syncpoint paths.
    pub path_cap: u64,
    /// Also report unions of two closed regions between the same syncpoint
    /// pair when each region alone has a single entry or a single exit.
    pub pair_small_regions: bool,
    /// Skip syncpoint pairs whose inner vertex sets overlap at all, instead of
    /// only requiring two non-shared vertices on each side.
    pub disjoint_brackets: bool,
}

impl Default for FindConfig {
    fn default() -> Self {
        FindConfig {
            path_cap: DEFAULT_PATH_CAP,
            pair_small_regions: true,
            disjoint_brackets: false,
        }
    }
}

/// Pipeline stages, reported in order as each one completes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Syncpoints,
    PrecedenceDag,
    Paths,
    Search,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FindStats {
    pub stored_paths: usize,
    pub checked_paths: usize,
    pub cluster_checks: usize,
    pub deleted_superpaths: usize,
    /// Distinct clusters before the containment filter.
    pub candidates: usize,
}

#[derive(Debug, Clone)]
pub struct FindOutcome {
    pub msps: Vec<Syncpoint>,
    pub msp_dag: MspDag,
    pub clusters: Vec<Cluster>,
    pub stats: FindStats,
}

pub fn find_all_min_clusters(g: &StDag) -> Result<FindOutcome> {
    find_all_min_clusters_with(g, &FindConfig::default(), |_| {})
}

/// Full pipeline; `on_stage` is called after each stage finishes.
pub fn find_all_min_clusters_with(
    g: &StDag,
    config: &FindConfig,
    mut on_stage: impl FnMut(Stage),
) -> Result<FindOutcome> {
    let msps = find_all_msps(g);
    on_stage(Stage::Syncpoints);
    let msp_dag = build_msp_dag(g, &msps);
    on_stage(Stage::PrecedenceDag);
    let mut store = PathStore::build(&msp_dag, config.path_cap)?;
    let openers: Vec<Option<Syncpoint>> = msps.iter().map(|m| m.opening_bracket(g)).collect();
    let closers: Vec<Option<Syncpoint>> = msps.iter().map(|m| m.closing_bracket(g)).collect();
    store.filter_relevant(
        &openers.iter().map(Option::is_some).collect::<Vec<_>>(),
        &closers.iter().map(Option::is_some).collect::<Vec<_>>(),
    );
    on_stage(Stage::Paths);

    let reach = build_reachability_index(g);
    let mut stats = FindStats {
        stored_paths: store.path_count(),
        ..FindStats::default()
    };
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut found: Vec<(BitSet, usize, usize)> = Vec::new();
    let mut memo: Vec<Option<Option<Vec<BitSet>>>> = vec![None; msps.len() * msps.len()];

    while let Some(p) = store.next_unchecked() {
        stats.checked_paths += 1;
        let (open_id, close_id) = (store.start_node(p), store.end_node(p));
        // The check depends only on the bracketing pair, not on the path between.
        let slot = &mut memo[open_id * msps.len() + close_id];
        let fresh = slot.is_none();
        let regions = slot.get_or_insert_with(|| {
            let (Some(opening), Some(closing)) = (&openers[open_id], &closers[close_id]) else {
                return None;
            };
            if !brackets_admissible(opening, closing, config.disjoint_brackets) {
                return None;
            }
            let runs = seed_runs(g, &reach, opening, closing, false);
            let mut regions: Vec<BitSet> =
                runs.iter().filter_map(|r| r.cluster().cloned()).collect();
            if config.pair_small_regions {
                regions.extend(paired_small_regions(&runs));
            }
            Some(regions)
        });
        let Some(regions) = regions else { continue };
        stats.cluster_checks += 1;
        if regions.is_empty() {
            continue;
        }
        if fresh {
            for region in regions.iter() {
                if seen.insert(region.to_vec()) {
                    found.push((region.clone(), open_id, close_id));
                }
            }
        }
        stats.deleted_superpaths += store.delete_with_superpaths(p);
    }
    stats.candidates = found.len();

    let mut clusters = Vec::new();
    for (i, (region, opening, closing)) in found.iter().enumerate() {
        let contains_other = found.iter().enumerate().any(|(j, (other, _, _))| {
            i != j && other.is_subset(region) && other.count() < region.count()
        });
        if contains_other {
            continue;
        }
        let sub = induced_subgraph_idx(g, region);
        clusters.push(Cluster {
            is_complex: is_irreducible(&sub.vertices, &sub.edges),
            vertices: sub.vertices,
            entries: sub.entries,
            exits: sub.exits,
            opening_msp: Some(*opening),
            closing_msp: Some(*closing),
        });
    }
    on_stage(Stage::Search);
    Ok(FindOutcome {
        msps,
        msp_dag,
        clusters,
        stats,
    })
}

/// Whether `opening` and `closing` can bracket a cluster. A vertex in both
/// the end set of `opening` and the start set of `closing` only ever forms a
/// one-vertex region of its own, so by default shared vertices are discounted
/// rather than ruling out the pair.
pub fn brackets_admissible(opening: &Syncpoint, closing: &Syncpoint, disjoint: bool) -> bool {
    let shared = opening
        .end
        .iter()
        .filter(|v| closing.start.binary_search(v).is_ok())
        .count();
    if disjoint {
        shared == 0 && opening.end.len() >= 2 && closing.start.len() >= 2
    } else {
        opening.end.len() - shared >= 2 && closing.start.len() - shared >= 2
    }
}

/// Unions of two closed regions that each fall short of two entries or two
/// exits. Regions from distinct seeds are disjoint and unconnected, so every
/// such pair is a cluster with at least two entries and two exits.
fn paired_small_regions(runs: &[SeedRun]) -> Vec<BitSet> {
    let small: Vec<&BitSet> = runs
        .iter()
        .filter(|r| r.cluster().is_none() && !r.xset().intersects(r.yset()))
        .filter_map(|r| r.closed.as_ref())
        .collect();
    let mut out = Vec::new();
    for (i, a) in small.iter().enumerate() {
        for b in &small[i + 1..] {
            let mut u = (*a).clone();
            u.union_with(b);
            out.push(u);
        }
    }
    out
}
