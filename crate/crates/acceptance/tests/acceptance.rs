//! End-to-end acceptance criteria. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.
//!
//! Run alone with `cargo test -p mincluster --test acceptance -- --nocapture`.

use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mincluster::stats::{run_row, RunStats};
use mincluster_core::oracle::{oracle_all_paths, oracle_count_paths, oracle_minimal_clusters, oracle_superpaths};
use mincluster_core::{
    build_msp_dag, find_all_min_clusters, find_all_msps, fixtures, generate_dag, is_syncpoint, sp_reduce,
    transitive_reduction, validate_st_dag, Error, FindConfig, GenParams, MspDag, PathStore, StDag, SyncpointKind,
    VertexId, DEFAULT_PATH_CAP,
};

type Verdict = Result<String, String>;

fn labels(xs: &[u32]) -> Vec<VertexId> {
    xs.iter().map(|&x| VertexId(x)).collect()
}

fn plain(sets: &[Vec<VertexId>]) -> Vec<Vec<u32>> {
    sets.iter().map(|s| s.iter().map(|v| v.0).collect()).collect()
}

fn cluster_sets(g: &StDag) -> Vec<Vec<VertexId>> {
    let mut sets: Vec<_> = find_all_min_clusters(g).unwrap().clusters.into_iter().map(|c| c.vertices).collect();
    sets.sort();
    sets
}

/// Draws seeds from `first` on until `want` graphs are generated; exhausted
/// disruptive-edge placement skips the seed.
fn generated(base: GenParams, first: u64, want: usize) -> (Vec<StDag>, usize) {
    let (mut out, mut exhausted, mut seed) = (Vec::new(), 0, first);
    while out.len() < want {
        match generate_dag(&GenParams { seed, ..base }) {
            Ok(gen) => out.push(gen.dag),
            Err(Error::DisruptiveEdgeExhausted { .. }) => exhausted += 1,
            Err(e) => panic!("seed {seed}: {e}"),
        }
        seed += 1;
        assert!(seed - first < 10 * want as u64, "too many exhausted seeds");
    }
    (out, exhausted)
}

fn reference_graphs() -> Verdict {
    let start = Instant::now();
    let fig1 = cluster_sets(&fixtures::fig1());
    let fig1_out = find_all_min_clusters(&fixtures::fig1()).unwrap();
    let fig6 = cluster_sets(&fixtures::fig6());
    let fig5 = cluster_sets(&fixtures::fig5());
    let elapsed = start.elapsed();
    let want5: Vec<u32> = (9..=20).collect();
    let ok = fig1 == vec![labels(&[2, 3, 5, 6])]
        && fig1_out.clusters[0].is_complex
        && fig6 == vec![labels(&[4, 5, 8, 9])]
        && fig5.contains(&labels(&want5))
        && elapsed < Duration::from_secs(1);
    let detail = format!(
        "fig1 {:?}, fig6 {:?}, fig5 has 9..=20: {}, {elapsed:.1?}",
        plain(&fig1),
        plain(&fig6),
        fig5.contains(&labels(&want5))
    );
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let base = GenParams {
        n: 12,
        maxwidth: 4,
        narb: 3,
        ..GenParams::default()
    };
    let (graphs, exhausted) = generated(base, 1, 300);
    let mut mismatches = Vec::new();
    let mut largest = 0;
    for g in &graphs {
        largest = largest.max(g.len());
        if cluster_sets(g) != oracle_minimal_clusters(g).unwrap() {
            mismatches.push(g.edge_labels());
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "{} graphs (up to {largest} vertices, {exhausted} exhausted seeds skipped), {} mismatches, {elapsed:.1?}",
        graphs.len(),
        mismatches.len()
    );
    if mismatches.is_empty() && elapsed < Duration::from_secs(300) {
        Ok(detail)
    } else {
        Err(format!("{detail}; first mismatch: {:?}", mismatches.first()))
    }
}

fn syncpoint_properties() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut violations = Vec::new();
    let (mut graphs, mut total_msps, mut seed) = (0, 0, 0u64);
    while graphs < 1000 {
        seed += 1;
        let params = GenParams {
            n: rng.gen_range(4..=200),
            maxwidth: rng.gen_range(2..=10),
            narb: rng.gen_range(0..=20),
            seed,
            ..GenParams::default()
        };
        let Ok(gen) = generate_dag(&params) else { continue };
        let g = gen.dag;
        graphs += 1;
        let msps = find_all_msps(&g);
        total_msps += msps.len();
        let edge_sets: Vec<Vec<(VertexId, VertexId)>> = msps.iter().map(|m| m.edge_labels(&g)).collect();
        for (m, edges) in msps.iter().zip(&edge_sets) {
            if is_syncpoint(&g, edges).unwrap() != Some(m.kind) {
                violations.push(format!("seed {seed}: MSP {} fails its predicate", m.id));
            }
        }
        for (i, a) in edge_sets.iter().enumerate() {
            for (j, b) in edge_sets.iter().enumerate() {
                if i != j && a.len() < b.len() && a.iter().all(|e| b.contains(e)) {
                    violations.push(format!("seed {seed}: MSP {i} is inside MSP {j}"));
                }
            }
        }
        let (s, t) = (g.source(), g.target());
        let leaving: Vec<_> = g.succ(s).iter().map(|&v| (g.label(s), g.label(v as usize))).collect();
        let entering: Vec<_> = g.pred(t).iter().map(|&v| (g.label(v as usize), g.label(t))).collect();
        for mut side in [leaving, entering] {
            side.sort();
            // A lone edge satisfies both conditions and is reported as 1-to-1.
            let kind = if side.len() == 1 { SyncpointKind::Sp11 } else { SyncpointKind::Fsp };
            if !msps.iter().zip(&edge_sets).any(|(m, e)| m.kind == kind && *e == side) {
                violations.push(format!("seed {seed}: edges at s or t are not a syncpoint"));
            }
        }
        let dag = build_msp_dag(&g, &msps);
        if dag.sources().len() != 1 || dag.targets().len() != 1 {
            violations.push(format!("seed {seed}: MSP-DAG has several sources or targets"));
        }
    }
    let detail = format!("{graphs} DAGs, {total_msps} MSPs, {} violations", violations.len());
    if violations.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; {:?}", &violations[..violations.len().min(3)]))
    }
}

fn complete_msp_dag(n: usize) -> MspDag {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    MspDag::from_edges(n, &edges).unwrap()
}

fn path_count_formulas() -> Verdict {
    let mut rows = Vec::new();
    for n in 3..=12usize {
        let dag = complete_msp_dag(n);
        let store = PathStore::build(&dag, DEFAULT_PATH_CAP).unwrap();
        let succ: Vec<Vec<usize>> = (0..n).map(|v| dag.succ(v).to_vec()).collect();
        let enumerated = oracle_count_paths(&succ).unwrap();
        let paths = (1usize << n) - (n + 1);
        let cost = (2 * n as u64 - 4) * (1u64 << (n - 2)) + 1;
        if store.path_count() != paths || enumerated != paths || store.append_cost() != cost {
            rows.push(format!(
                "n={n}: stored {} enumerated {enumerated} expected {paths}, cost {} expected {cost}",
                store.path_count(),
                store.append_cost()
            ));
        }
    }
    if rows.is_empty() {
        Ok("n = 3..12 exact (paths by closed form and by enumeration)".into())
    } else {
        Err(rows.join("; "))
    }
}

fn superpath_deletion() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut checked, mut mismatches) = (0, 0);
    for _ in 0..120 {
        let n = rng.gen_range(2..=12usize);
        let density = rng.gen_range(0.2..0.8);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|_| rng.gen_bool(density))
            .collect();
        let dag = MspDag::from_edges(n, &edges).unwrap();
        let store = PathStore::build(&dag, DEFAULT_PATH_CAP).unwrap();
        let succ: Vec<Vec<usize>> = (0..n).map(|v| dag.succ(v).to_vec()).collect();
        let all = oracle_all_paths(&succ).unwrap();
        for p in store.ids().filter(|&p| store.vlen(p) >= 2) {
            let mut trial = store.clone();
            trial.delete_with_superpaths(p);
            let mut deleted: Vec<Vec<usize>> =
                trial.ids().filter(|&q| q != p && trial.is_deleted(q)).map(|q| trial.nodes(q)).collect();
            deleted.sort();
            let mut naive: Vec<Vec<usize>> =
                oracle_superpaths(&all, &store.nodes(p)).into_iter().map(|i| all[i].clone()).collect();
            naive.sort();
            checked += 1;
            if deleted != naive {
                mismatches += 1;
            }
        }
    }
    let detail = format!("120 MSP-DAGs, {checked} paths, {mismatches} mismatches");
    if mismatches == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn row_params(n: usize) -> GenParams {
    let (maxwidth, narb) = if n == 1000 { (22, 100) } else { (10, 20) };
    GenParams {
        n,
        parexp: 0.33,
        serexp: 0.33,
        maxwidth,
        clustsettle: 0.4,
        narb,
        seed: 1000,
    }
}

fn batch_statistics(rows: &[RunStats; 2]) -> Verdict {
    let [small, large] = rows;
    let small_msps = small.msp_count.unwrap().mean;
    let clusters = small.clusters_per_dag.unwrap().mean;
    let min_size = small.cluster_sizes.unwrap().min;
    let large_msps = large.msp_count.unwrap().mean;
    let literal = |disjoint| FindConfig {
        pair_small_regions: false,
        disjoint_brackets: disjoint,
        ..FindConfig::default()
    };
    let disjoint = run_row(&row_params(200), 100, &literal(true), false);
    let relaxed = run_row(&row_params(200), 100, &literal(false), false);
    let detail = format!(
        "n=200: MSPs {small_msps:.2} (18..42), clusters/DAG {clusters:.2} (0.8..3.5), min size {min_size}; \
         n=1000: MSPs {large_msps:.2} (55..110); failed samples {}+{}; \
         clusters/DAG with disjoint brackets only {:.2}, without region pairing {:.2}",
        small.failures.len(),
        large.failures.len(),
        disjoint.clusters_per_dag.unwrap().mean,
        relaxed.clusters_per_dag.unwrap().mean
    );
    let ok = (18.0..=42.0).contains(&small_msps)
        && (0.8..=3.5).contains(&clusters)
        && min_size == 4.0
        && (55.0..=110.0).contains(&large_msps);
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn runtime_scaling(rows: &[RunStats; 2]) -> Verdict {
    let small = rows[0].runtime_s.unwrap().mean;
    let large = rows[1].runtime_s.unwrap().mean;
    let growth = large / small;
    let detail = format!("mean {small:.4} s at n=200, {large:.4} s at n=1000, growth {growth:.1}x (<= 40, <= 2.5 s)");
    if growth <= 40.0 && large <= 2.5 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn generator_validity() -> Verdict {
    let mut grid = Vec::new();
    for n in [3, 10, 40, 120, 300] {
        for maxwidth in [2, 5, 10] {
            for (parexp, serexp) in [(0.33, 0.33), (0.6, 0.2), (0.1, 0.1), (0.5, 0.5)] {
                let narb = if n == 3 { 0 } else { n / 20 + 1 };
                grid.push(GenParams {
                    n,
                    parexp,
                    serexp,
                    maxwidth,
                    clustsettle: 0.4,
                    narb,
                    seed: 0,
                });
            }
        }
    }
    let (mut samples, mut exhausted, mut bad) = (0, 0, Vec::new());
    let mut seed = 0u64;
    while samples < 1000 {
        let params = GenParams {
            seed,
            ..grid[seed as usize % grid.len()]
        };
        seed += 1;
        let gen = match generate_dag(&params) {
            Ok(gen) => gen,
            Err(Error::DisruptiveEdgeExhausted { .. }) => {
                exhausted += 1;
                continue;
            }
            Err(e) => return Err(format!("seed {}: {e}", params.seed)),
        };
        samples += 1;
        let g = &gen.dag;
        let valid = validate_st_dag(&g.sorted_labels(), &g.edge_labels()).is_ok();
        let reduced = transitive_reduction(g).1.is_empty();
        let sized = (params.n..=params.max_vertices()).contains(&g.len());
        if !(valid && reduced && sized) {
            bad.push(params.seed);
        }
    }
    let detail = format!(
        "{samples} samples over {} parameter sets, {exhausted} exhausted seeds redrawn, {} invalid",
        grid.len(),
        bad.len()
    );
    if bad.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}: seeds {bad:?}"))
    }
}

fn series_parallel_sanity() -> Verdict {
    let mut reduced = 0;
    for seed in 0..100 {
        let params = GenParams {
            n: 60,
            parexp: 0.5,
            serexp: 0.5,
            narb: 0,
            seed,
            ..GenParams::default()
        };
        let g = generate_dag(&params).unwrap().dag;
        if sp_reduce(&g.sorted_labels(), &g.edge_labels()).fully_reduced {
            reduced += 1;
        }
    }
    let irreducible = |g: StDag| !sp_reduce(&g.sorted_labels(), &g.edge_labels()).fully_reduced;
    let (w6, fig1) = (irreducible(fixtures::w6()), irreducible(fixtures::fig1()));
    let detail = format!("{reduced}/100 reduced, W6 irreducible {w6}, fig1 irreducible {fig1}");
    if reduced == 100 && w6 && fig1 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn report(number: usize, name: &str, run: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let (tag, detail) = match &verdict {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    let line = format!("criterion {number} {tag} {name}: {detail} [{:.1?}]\n", start.elapsed());
    // Straight to the stream so the line shows even when the test passes.
    let _ = std::io::stderr().write_all(line.as_bytes());
    verdict.is_ok()
}

#[test]
fn primary_criteria() {
    let mut failed = Vec::new();
    let mut check = |number, name, run: &mut dyn FnMut() -> Verdict| {
        if !report(number, name, run) {
            failed.push(number);
        }
    };
    check(1, "reference graphs", &mut reference_graphs);
    check(2, "oracle equivalence", &mut oracle_equivalence);
    check(3, "syncpoint properties", &mut syncpoint_properties);
    check(4, "path-count formulas", &mut path_count_formulas);
    check(5, "superpath deletion", &mut superpath_deletion);

    let config = FindConfig::default();
    let rows = [
        run_row(&row_params(200), 100, &config, true),
        run_row(&row_params(1000), 100, &config, true),
    ];
    check(6, "batch statistics", &mut || batch_statistics(&rows));
    check(7, "runtime scaling", &mut || runtime_scaling(&rows));
    check(8, "generator validity", &mut generator_validity);
    check(9, "series-parallel sanity", &mut series_parallel_sanity);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
