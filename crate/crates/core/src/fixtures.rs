//! Small reference graphs with known cluster structure.
//!
//! The lettered graphs (`diamond`, `chain3`, `w6`) share the labels
//! [`S`], [`A`], [`B`], [`C`], [`D`], [`T`]. The numbered graphs reproduce
//! the published example DAGs' documented properties with their vertex
//! numbering.

use alloc::vec::Vec;

use crate::graph::{validate_st_dag, StDag, VertexId};

pub const S: VertexId = VertexId(1);
pub const A: VertexId = VertexId(2);
pub const B: VertexId = VertexId(3);
pub const C: VertexId = VertexId(4);
pub const D: VertexId = VertexId(5);
pub const T: VertexId = VertexId(6);

/// Builds an st-DAG from plain integer labels; panics on invalid input.
pub fn dag(vertices: &[u32], edges: &[(u32, u32)]) -> StDag {
    let vs: Vec<VertexId> = vertices.iter().map(|&v| VertexId(v)).collect();
    let es: Vec<(VertexId, VertexId)> = edges
        .iter()
        .map(|&(a, b)| (VertexId(a), VertexId(b)))
        .collect();
    validate_st_dag(&vs, &es).expect("fixture must be a valid st-DAG")
}

fn range(lo: u32, hi: u32) -> Vec<u32> {
    (lo..=hi).collect()
}

/// `s -> {a, b} -> t`.
pub fn diamond() -> StDag {
    dag(&[1, 2, 3, 6], &[(1, 2), (1, 3), (2, 6), (3, 6)])
}

/// `s -> a -> t`.
pub fn chain3() -> StDag {
    dag(&[1, 2, 6], &[(1, 2), (2, 6)])
}

/// The smallest complex cluster bracketed by two syncpoints:
/// `s -> {a, b}`, `a -> {c, d}`, `b -> d`, `{c, d} -> t`.
pub fn w6() -> StDag {
    dag(
        &[1, 2, 3, 4, 5, 6],
        &[(1, 2), (1, 3), (2, 4), (2, 5), (3, 5), (4, 6), (5, 6)],
    )
}

/// Ten vertices with `s = 1`, `t = 10`; `4 -> 7` is a serial pair, `8` and `9`
/// are parallel, `{2,3,5,6}` is the only minimal cluster (and complex), while
/// `{2..7}` and `{2..9}` are non-minimal, non-complex clusters.
pub fn fig1() -> StDag {
    dag(
        &range(1, 10),
        &[
            (1, 2),
            (1, 3),
            (1, 4),
            (2, 5),
            (2, 6),
            (3, 6),
            (4, 7),
            (5, 8),
            (5, 9),
            (6, 8),
            (6, 9),
            (7, 8),
            (7, 9),
            (8, 10),
            (9, 10),
        ],
    )
}

/// A DAG whose MSP-DAG has six nodes `A..F` (in topological order) with edges
/// `AB, AC, AE, BE, CD, CE, DE, DF, EF`; `AE`, `CE` and `DF` are redundant.
/// The only minimal cluster is `{4,5,8,9}` (bracketed by `B` and part of `E`);
/// `{2,3,4,5,8,9,10,11}` is a cluster bracketed by parts of `A` and `E`.
pub fn fig6() -> StDag {
    dag(
        &range(1, 16),
        &[
            (1, 2),
            (1, 3),
            (1, 6),
            (2, 4),
            (2, 5),
            (2, 11),
            (3, 10),
            (3, 11),
            (4, 8),
            (4, 9),
            (5, 9),
            (6, 7),
            (6, 12),
            (12, 13),
            (12, 14),
            (7, 15),
            (8, 15),
            (9, 15),
            (10, 15),
            (11, 15),
            (13, 15),
            (14, 16),
            (15, 16),
        ],
    )
}

/// Twenty-two vertices. `{9..20}` induces the only minimal cluster, which is
/// complex; it opens with the FSP `8 -> {9,10}` and closes with the FSP
/// `{19,20} -> 21`. The path `9 -> 11 -> 19` crosses no syncpoint edge, so the
/// MSP-DAG links the two brackets directly, and that edge is redundant next
/// to the route through the inner FSPs `{14,15} -> 16` and `16 -> {17,18}`.
pub fn fig5() -> StDag {
    dag(
        &range(1, 22),
        &[
            (1, 2),
            (1, 3),
            (2, 4),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 7),
            (7, 8),
            (8, 9),
            (8, 10),
            (9, 11),
            (9, 12),
            (10, 12),
            (10, 13),
            (11, 14),
            (11, 19),
            (12, 14),
            (12, 15),
            (13, 15),
            (14, 16),
            (15, 16),
            (16, 17),
            (16, 18),
            (17, 19),
            (17, 20),
            (18, 20),
            (19, 21),
            (20, 21),
            (21, 22),
        ],
    )
}

/// The complete DAG on `1..=n` (every forward edge present). It is not
/// transitively reduced; it serves as the worst case for path enumeration.
pub fn complete_edges(n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            out.push((a, b));
        }
    }
    out
}
