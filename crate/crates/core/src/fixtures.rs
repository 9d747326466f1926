//! A ten-vertex road network with a hand-chosen separator tree, used by
//! tests, examples and the CLI smoke tests.
//!
//! Vertices are numbered 1..=10 externally (internal id = external - 1).

use crate::error::Result;
use crate::graph::{Graph, VertexId};
use crate::hierarchy_q::{QueryHierarchy, QueryHierarchyBuilder, Side};

/// `(a, b, weight)` with external ids.
pub const SAMPLE_EDGES: [(u32, u32, u64); 14] = [
    (1, 5, 2),
    (1, 7, 4),
    (5, 10, 4),
    (5, 4, 6),
    (7, 4, 3),
    (7, 3, 5),
    (4, 10, 1),
    (4, 9, 5),
    (2, 3, 5),
    (2, 6, 2),
    (2, 8, 1),
    (6, 10, 4),
    (8, 9, 3),
    (9, 10, 2),
];

/// Internal id of external vertex `x`.
pub const fn v(x: u32) -> VertexId {
    x - 1
}

pub fn sample_network() -> Graph {
    Graph::from_arcs(10, SAMPLE_EDGES.iter().map(|&(a, b, w)| (v(a), v(b), w)))
        .expect("sample network is valid")
}

/// Root `{3, 4, 10}`; left subtree `{1}` over `{5}` and `{7}`; right subtree
/// `{2}` over `{8}` (with `{9}` below it) and `{6}`.
pub fn sample_hierarchy() -> Result<QueryHierarchy> {
    let ids = |xs: &[u32]| xs.iter().map(|&x| v(x)).collect::<Vec<_>>();
    let mut b = QueryHierarchyBuilder::new(10);
    let root = b.add_root(ids(&[3, 4, 10]))?;
    let left = b.add_child(root, Side::Left, ids(&[1]))?;
    b.add_child(left, Side::Left, ids(&[5]))?;
    b.add_child(left, Side::Right, ids(&[7]))?;
    let right = b.add_child(root, Side::Right, ids(&[2]))?;
    let eight = b.add_child(right, Side::Left, ids(&[8]))?;
    b.add_child(right, Side::Right, ids(&[6]))?;
    b.add_child(eight, Side::Left, ids(&[9]))?;
    b.finish(0.2, 1)
}
