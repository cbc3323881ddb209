//! The cluster search with wall-clock instrumentation.

use std::time::Instant;

use mincluster_core::{
    find_all_min_clusters_with, normalize, FindConfig, FindOutcome, RedundancyPolicy, StDag, Stage,
};

use crate::error::CliResult;
use crate::formats::{ClusterDoc, FindDoc, MspDagEdges, MspDoc, SearchDoc, TimingsMs};

#[derive(Debug, Clone)]
pub struct TimedRun {
    pub outcome: FindOutcome,
    pub timings: TimingsMs,
}

impl TimedRun {
    pub fn seconds(&self) -> f64 {
        self.timings.total / 1000.0
    }
}

/// Runs the search on `g`. The clock starts before syncpoint detection and
/// stops once the clusters are classified.
pub fn run_timed(g: &StDag, config: &FindConfig) -> CliResult<TimedRun> {
    let mut timings = TimingsMs::default();
    let start = Instant::now();
    let mut last = start;
    let outcome = find_all_min_clusters_with(g, config, |stage| {
        let now = Instant::now();
        let ms = (now - last).as_secs_f64() * 1000.0;
        last = now;
        match stage {
            Stage::Syncpoints => timings.syncpoints = ms,
            Stage::PrecedenceDag => timings.msp_dag = ms,
            Stage::Paths => timings.paths = ms,
            Stage::Search => timings.search = ms,
        }
    })?;
    timings.total = start.elapsed().as_secs_f64() * 1000.0;
    Ok(TimedRun { outcome, timings })
}

/// Drops redundant edges, runs the search and assembles the result document.
pub fn find_document(g: StDag, config: &FindConfig, with_timings: bool) -> CliResult<(StDag, FindDoc)> {
    let normalized = normalize(g, RedundancyPolicy::Reduce)?;
    let g = normalized.dag;
    let run = run_timed(&g, config)?;
    let out = &run.outcome;
    let doc = FindDoc {
        clusters: out.clusters.iter().map(ClusterDoc::from).collect(),
        msps: out.msps.iter().map(|m| MspDoc::new(&g, m)).collect(),
        msp_dag: MspDagEdges {
            edges: out.msp_dag.edges().iter().map(|&(a, b)| [a, b]).collect(),
            topo_order: out.msp_dag.topo_order().to_vec(),
        },
        removed_redundant_edges: normalized.removed.iter().map(|&(u, v)| [u.0, v.0]).collect(),
        search: SearchDoc::from(&out.stats),
        timings_ms: with_timings.then_some(run.timings),
    };
    Ok((g, doc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use mincluster_core::{fixtures, validate_st_dag, VertexId};

    #[test]
    fn stage_times_add_up() {
        let run = run_timed(&fixtures::fig6(), &FindConfig::default()).unwrap();
        let t = run.timings;
        let parts = t.syncpoints + t.msp_dag + t.paths + t.search;
        assert!(parts <= t.total + 1e-9);
        assert_eq!(run.outcome.clusters.len(), 1);
    }

    #[test]
    fn redundant_edges_are_dropped_and_reported() {
        let v = VertexId;
        let mut edges = fixtures::fig1().edge_labels();
        edges.push((v(1), v(10)));
        let g = validate_st_dag(&fixtures::fig1().sorted_labels(), &edges).unwrap();
        let (reduced, doc) = find_document(g, &FindConfig::default(), false).unwrap();
        assert_eq!(reduced, fixtures::fig1());
        assert_eq!(doc.removed_redundant_edges, vec![[1, 10]]);
        assert_eq!(doc.clusters[0].vertices, vec![2, 3, 5, 6]);
        assert!(doc.timings_ms.is_none());
    }
}
