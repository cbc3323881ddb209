//! Minimal cluster detection in single-source/single-target DAGs.
//!
//! The pipeline finds every maximum syncpoint of the graph, orders them in a
//! precedence DAG, enumerates syncpoint paths by increasing length and checks
//! the region between each path's end points for closed clusters.
//!
//! ```
//! use mincluster_core::{find_all_min_clusters, fixtures, VertexId};
//!
//! let out = find_all_min_clusters(&fixtures::w6()).unwrap();
//! assert_eq!(out.clusters.len(), 1);
//! assert_eq!(out.clusters[0].entries, vec![VertexId(2), VertexId(3)]);
//! ```

#![no_std]

extern crate alloc;

pub mod bitset;
pub mod cluster;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod msp_dag;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod paths;
pub mod randgen;
pub mod sp;
pub mod syncpoint;

pub use bitset::BitSet;
pub use cluster::{
    classify_cluster, closed_check, cluster_check, find_all_min_clusters, find_all_min_clusters_with,
    Cluster, FindConfig, FindOutcome, FindStats, Stage,
};
pub use error::{Error, Result};
pub use graph::{
    build_reachability_index, induced_subgraph_with_borders, normalize, topological_order,
    transitive_reduction, twin_classes, validate_st_dag, InducedSubgraph, Normalized,
    ReachabilityIndex, RedundancyPolicy, StDag, TwinPartition, VertexId,
};
pub use msp_dag::{build_msp_dag, MspDag};
pub use paths::{is_superpath, PathId, PathStore, Slot, DEFAULT_PATH_CAP};
pub use randgen::{generate_dag, GenParams, GeneratedDag, GenerationRecord};
pub use sp::{is_irreducible, sp_reduce, SpReduction, SpStep};
pub use syncpoint::{find_all_msps, is_syncpoint, Syncpoint, SyncpointKind};
