use mincluster_core::oracle::{oracle_all_paths, oracle_minimal_clusters, oracle_superpaths};
use mincluster_core::randgen::GenGraph;
use mincluster_core::sp::sp_reduce_random;
use mincluster_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn params() -> impl Strategy<Value = GenParams> {
    (3usize..40, 2usize..6, 0usize..5, 0.0f64..0.5, 0.0f64..0.5, 0.1f64..0.9, any::<u64>()).prop_map(
        |(n, maxwidth, narb, parexp, serexp, clustsettle, seed)| GenParams {
            n,
            parexp,
            serexp,
            maxwidth,
            clustsettle,
            narb,
            seed,
        },
    )
}

fn generated() -> impl Strategy<Value = (GenParams, StDag)> {
    params().prop_filter_map("disruptive edges exhausted", |p| {
        generate_dag(&p).ok().map(|g| (p, g.dag))
    })
}

fn small() -> impl Strategy<Value = StDag> {
    (4usize..14, 2usize..5, 0usize..4, any::<u64>()).prop_filter_map("exhausted", |(n, maxwidth, narb, seed)| {
        let p = GenParams {
            n,
            maxwidth,
            narb,
            seed,
            ..GenParams::default()
        };
        generate_dag(&p).ok().map(|g| g.dag).filter(|g| g.len() <= 18)
    })
}

/// Random DAGs on up to 10 nodes, edges only from lower to higher id.
fn small_msp_dag() -> impl Strategy<Value = MspDag> {
    (2usize..=10)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)))
        .prop_map(|(n, bits)| {
            let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            let edges: Vec<(usize, usize)> = pairs.zip(bits).filter(|(_, on)| *on).map(|(e, _)| e).collect();
            MspDag::from_edges(n, &edges).unwrap()
        })
}

fn family(out: &FindOutcome) -> Vec<Vec<VertexId>> {
    let mut sets: Vec<_> = out.clusters.iter().map(|c| c.vertices.clone()).collect();
    sets.sort();
    sets
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn generated_dags_are_reduced_st_dags((p, g) in generated()) {
        let again = validate_st_dag(&g.sorted_labels(), &g.edge_labels()).unwrap();
        prop_assert_eq!(&again, &g);
        let (reduced, removed) = transitive_reduction(&g);
        prop_assert!(removed.is_empty());
        prop_assert_eq!(reduced, g.clone());
        prop_assert!(g.len() >= p.n && g.len() <= p.max_vertices());
    }

    #[test]
    fn generation_is_deterministic(p in params()) {
        prop_assert_eq!(generate_dag(&p).map(|g| g.dag), generate_dag(&p).map(|g| g.dag));
    }

    #[test]
    fn topological_order_respects_edges((_, g) in generated()) {
        let order = topological_order(&g);
        let pos = |v: VertexId| order.iter().position(|&w| w == v).unwrap();
        for (u, v) in g.edge_labels() {
            prop_assert!(pos(u) < pos(v));
        }
        prop_assert_eq!(order[0], g.label(g.source()));
        prop_assert_eq!(*order.last().unwrap(), g.label(g.target()));
    }

    #[test]
    fn reachability_is_reflexive_and_mirrored((_, g) in generated()) {
        let reach = build_reachability_index(&g);
        for u in 0..g.len() {
            prop_assert!(reach.reaches(u, u));
            prop_assert!(reach.reaches(g.source(), u) && reach.reaches(u, g.target()));
            for v in 0..g.len() {
                prop_assert_eq!(reach.fw(u).contains(v), reach.bw(v).contains(u));
            }
            for &w in g.succ(u) {
                prop_assert!(reach.fw(w as usize).is_subset(reach.fw(u)));
            }
        }
    }

    #[test]
    fn twin_classes_are_disjoint_and_exact((_, g) in generated()) {
        let twins = twin_classes(&g);
        for (classes, by_pred) in [(&twins.in_twins, true), (&twins.out_twins, false)] {
            let neighbours = |v: VertexId| {
                let i = g.index_of(v).unwrap();
                if by_pred { g.pred(i).to_vec() } else { g.succ(i).to_vec() }
            };
            let mut seen = Vec::new();
            for class in classes {
                prop_assert!(class.len() >= 2);
                let key = neighbours(class[0]);
                for &v in class {
                    prop_assert_eq!(neighbours(v), key.clone());
                    prop_assert!(!seen.contains(&v));
                    seen.push(v);
                }
            }
            // Every vertex outside the classes has a unique neighbour set.
            for i in 0..g.len() {
                let v = g.label(i);
                if !seen.contains(&v) {
                    let same = (0..g.len()).filter(|&j| neighbours(g.label(j)) == neighbours(v)).count();
                    prop_assert_eq!(same, 1);
                }
            }
        }
    }

    #[test]
    fn sp_reduction_result_ignores_step_order((_, g) in generated(), seed in any::<u64>()) {
        let greedy = sp_reduce(&g.sorted_labels(), &g.edge_labels());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random = sp_reduce_random(&g.sorted_labels(), &g.edge_labels(), &mut rng);
        prop_assert_eq!(greedy.fully_reduced, random.fully_reduced);
        prop_assert_eq!(greedy.groups.len(), random.groups.len());
        let again = sp_reduce(&g.sorted_labels(), &g.edge_labels());
        prop_assert_eq!(greedy, again);
    }

    #[test]
    fn msps_satisfy_their_own_predicate((_, g) in generated()) {
        let msps = find_all_msps(&g);
        for m in &msps {
            prop_assert_eq!(is_syncpoint(&g, &m.edge_labels(&g)).unwrap(), Some(m.kind));
        }
        for a in &msps {
            for b in &msps {
                let (ea, eb) = (a.edge_labels(&g), b.edge_labels(&g));
                prop_assert!(a.id == b.id || !(ea.len() < eb.len() && ea.iter().all(|e| eb.contains(e))));
            }
        }
        let out_of_source: Vec<_> = g.succ(g.source()).iter().map(|&v| (g.label(g.source()), g.label(v as usize))).collect();
        let into_target: Vec<_> = g.pred(g.target()).iter().map(|&v| (g.label(v as usize), g.label(g.target()))).collect();
        for side in [out_of_source, into_target] {
            let mut side = side;
            side.sort();
            // A single edge satisfies both conditions and is reported as 1-to-1.
            let kind = if side.len() == 1 { SyncpointKind::Sp11 } else { SyncpointKind::Fsp };
            prop_assert!(msps.iter().any(|m| m.kind == kind && m.edge_labels(&g) == side));
        }
        let dag = build_msp_dag(&g, &msps);
        prop_assert_eq!(dag.sources().len(), 1);
        prop_assert_eq!(dag.targets().len(), 1);
    }

    #[test]
    fn separator_deletion_matches_naive_scan(dag in small_msp_dag()) {
        let store = PathStore::build(&dag, DEFAULT_PATH_CAP).unwrap();
        let succ: Vec<Vec<usize>> = (0..dag.len()).map(|v| dag.succ(v).to_vec()).collect();
        let all = oracle_all_paths(&succ).unwrap();
        prop_assert_eq!(store.path_count(), all.len());
        for p in store.ids().filter(|&p| store.vlen(p) >= 2) {
            let mut trial = store.clone();
            trial.delete_with_superpaths(p);
            let mut deleted: Vec<Vec<usize>> = trial
                .ids()
                .filter(|&q| q != p && trial.is_deleted(q))
                .map(|q| trial.nodes(q))
                .collect();
            deleted.sort();
            let mut naive: Vec<Vec<usize>> = oracle_superpaths(&all, &store.nodes(p))
                .into_iter()
                .map(|i| all[i].clone())
                .collect();
            naive.sort();
            prop_assert_eq!(deleted, naive);
        }
    }

    #[test]
    fn clusters_match_the_oracle(g in small()) {
        let out = find_all_min_clusters(&g).unwrap();
        prop_assert_eq!(family(&out), oracle_minimal_clusters(&g).unwrap());
        for c in &out.clusters {
            let classified = classify_cluster(&g, &c.vertices).unwrap();
            prop_assert_eq!(&classified.entries, &c.entries);
            prop_assert_eq!(&classified.exits, &c.exits);
            prop_assert_eq!(classified.is_complex, c.is_complex);
        }
    }

    #[test]
    fn cluster_search_is_deterministic((_, g) in generated()) {
        let a = find_all_min_clusters(&g).unwrap();
        let b = find_all_min_clusters(&g).unwrap();
        prop_assert_eq!(a.clusters, b.clusters);
        prop_assert_eq!(a.stats, b.stats);
    }

    #[test]
    fn closed_regions_grow_with_the_seed_sets((_, g) in generated()) {
        let reach = build_reachability_index(&g);
        let msps = find_all_msps(&g);
        for opening in &msps {
            for closing in &msps {
                for run in cluster_check(&g, &reach, opening, closing) {
                    let mut prev: Option<(BitSet, BitSet)> = None;
                    for (x, y) in run.history {
                        if let Some((px, py)) = &prev {
                            prop_assert!(px.is_subset(&x) && py.is_subset(&y));
                        }
                        prev = Some((x, y));
                    }
                }
            }
        }
    }

    #[test]
    fn single_disruptive_edge_keeps_reduction((_, g) in generated(), seed in any::<u64>()) {
        let mut gg = GenGraph::from_dag(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if gg.add_disruptive_edges(1, 200, &mut rng).is_ok() {
            let dag = gg.to_dag().unwrap();
            prop_assert!(transitive_reduction(&dag).1.is_empty());
        }
    }
}
