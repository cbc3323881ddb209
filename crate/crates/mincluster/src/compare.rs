//! Differential testing of the cluster search against exhaustive enumeration.

use serde::{Deserialize, Serialize};

use mincluster_core::oracle::{oracle_minimal_clusters, ORACLE_LIMIT};
use mincluster_core::{find_all_min_clusters_with, fixtures, generate_dag, FindConfig, GenParams, StDag};

use crate::error::CliResult;
use crate::formats::GraphDoc;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    /// Generator seed, or `None` for a built-in fixture.
    pub seed: Option<u64>,
    pub fixture: Option<String>,
    pub graph: GraphDoc,
    pub expected: Family,
    pub found: Family,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub compared: usize,
    pub fixtures_compared: usize,
    pub seeds_tried: usize,
    pub generator_failures: usize,
    /// Generated graphs above `max_n` vertices.
    pub skipped_large: usize,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    pub samples: usize,
    pub max_n: usize,
    pub include_fixtures: bool,
    /// Test hook: adds a bogus cluster to every search result.
    pub corrupt: bool,
}

/// Cluster vertex sets as sorted label lists.
pub type Family = Vec<Vec<u32>>;

/// Minimal clusters from the oracle and from the search, in that order.
pub fn both_routes(g: &StDag, config: &FindConfig, corrupt: bool) -> CliResult<(Family, Family)> {
    let to_u32 = |v: &[mincluster_core::VertexId]| v.iter().map(|x| x.0).collect::<Vec<u32>>();
    let expected: Family = oracle_minimal_clusters(g)?.iter().map(|c| to_u32(c)).collect();
    let mut found: Family = find_all_min_clusters_with(g, config, |_| {})?
        .clusters
        .iter()
        .map(|c| to_u32(&c.vertices))
        .collect();
    if corrupt {
        found.push(vec![g.label(g.source()).0]);
    }
    found.sort_unstable();
    Ok((expected, found))
}

/// Draws seeds `base.seed, base.seed + 1, ...` until `samples` graphs with at
/// most `max_n` vertices have been compared, giving up after `10 * samples`
/// seeds.
pub fn oracle_compare(base: &GenParams, options: &CompareOptions, config: &FindConfig) -> CliResult<CompareReport> {
    let max_n = options.max_n.min(ORACLE_LIMIT);
    let mut report = CompareReport::default();
    if options.include_fixtures {
        for (name, g) in [("w6", fixtures::w6()), ("fig1", fixtures::fig1()), ("fig6", fixtures::fig6())] {
            let (expected, found) = both_routes(&g, config, options.corrupt)?;
            report.fixtures_compared += 1;
            if expected != found {
                report.mismatches.push(Mismatch {
                    seed: None,
                    fixture: Some(name.to_string()),
                    graph: GraphDoc::from_dag(&g),
                    expected,
                    found,
                });
            }
        }
    }
    let limit = options.samples.saturating_mul(10).max(1);
    while report.compared < options.samples && report.seeds_tried < limit {
        let seed = base.seed.wrapping_add(report.seeds_tried as u64);
        report.seeds_tried += 1;
        let generated = match generate_dag(&GenParams { seed, ..*base }) {
            Ok(gen) => gen,
            Err(mincluster_core::Error::DisruptiveEdgeExhausted { .. }) => {
                report.generator_failures += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        if generated.dag.len() > max_n {
            report.skipped_large += 1;
            continue;
        }
        let (expected, found) = both_routes(&generated.dag, config, options.corrupt)?;
        report.compared += 1;
        if expected != found {
            let mut graph = GraphDoc::from_dag(&generated.dag);
            graph.generation = Some((&generated.record).into());
            report.mismatches.push(Mismatch {
                seed: Some(seed),
                fixture: None,
                graph,
                expected,
                found,
            });
        }
    }
    Ok(report)
}
