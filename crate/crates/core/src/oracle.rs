//! Reference answers computed without any of the index machinery.
//!
//! Nothing here shares relaxation code with the index: the searches are
//! plain textbook Dijkstra variants, and hierarchy ancestry is derived by
//! walking parent pointers instead of comparing bitstrings.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::error::{Error, Result};
use crate::graph::{Distance, Graph, VertexId, INFINITY};
use crate::hierarchy_q::QueryHierarchy;

/// Largest graph accepted by [`enumerate_valley_shortcuts`].
pub const VALLEY_ENUMERATION_LIMIT: usize = 12;

fn check(graph: &Graph, v: VertexId) -> Result<()> {
    graph.check_vertex(v)
}

fn search(
    graph: &Graph,
    s: VertexId,
    allowed: impl Fn(VertexId) -> bool,
    stop: Option<VertexId>,
) -> Vec<Distance> {
    let mut dist = vec![INFINITY; graph.num_vertices()];
    let mut heap = BinaryHeap::new();
    dist[s as usize] = 0;
    heap.push(Reverse((0u64, s)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if d > dist[x as usize] {
            continue;
        }
        if Some(x) == stop {
            break;
        }
        for (y, w) in graph.neighbors(x) {
            if w == INFINITY || !allowed(y) {
                continue;
            }
            let nd = d + w;
            if nd < dist[y as usize] {
                dist[y as usize] = nd;
                heap.push(Reverse((nd, y)));
            }
        }
    }
    dist
}

/// Single-source shortest distances.
pub fn dijkstra(graph: &Graph, s: VertexId) -> Result<Vec<Distance>> {
    check(graph, s)?;
    Ok(search(graph, s, |_| true, None))
}

/// Distance from `s` to `t`, stopping as soon as `t` is settled.
pub fn dijkstra_pair(graph: &Graph, s: VertexId, t: VertexId) -> Result<Distance> {
    check(graph, s)?;
    check(graph, t)?;
    Ok(search(graph, s, |_| true, Some(t))[t as usize])
}

/// Distance from `s` to `t` with searches growing from both ends.
pub fn bidirectional_dijkstra(graph: &Graph, s: VertexId, t: VertexId) -> Result<Distance> {
    check(graph, s)?;
    check(graph, t)?;
    if s == t {
        return Ok(0);
    }
    let n = graph.num_vertices();
    let mut dist = [vec![INFINITY; n], vec![INFINITY; n]];
    let mut heaps = [BinaryHeap::new(), BinaryHeap::new()];
    dist[0][s as usize] = 0;
    dist[1][t as usize] = 0;
    heaps[0].push(Reverse((0u64, s)));
    heaps[1].push(Reverse((0u64, t)));
    let mut best = INFINITY;
    loop {
        let top = |h: &BinaryHeap<Reverse<(u64, u32)>>| h.peek().map_or(INFINITY, |r| r.0 .0);
        let (a, b) = (top(&heaps[0]), top(&heaps[1]));
        if a == INFINITY && b == INFINITY {
            break;
        }
        if a.saturating_add(b) >= best {
            break;
        }
        let side = if a <= b { 0 } else { 1 };
        let Reverse((d, x)) = heaps[side].pop().unwrap();
        if d > dist[side][x as usize] {
            continue;
        }
        for (y, w) in graph.neighbors(x) {
            if w == INFINITY {
                continue;
            }
            let nd = d + w;
            if nd < dist[side][y as usize] {
                dist[side][y as usize] = nd;
                heaps[side].push(Reverse((nd, y)));
            }
            let other = dist[1 - side][y as usize];
            if other != INFINITY {
                best = best.min(nd.min(dist[side][y as usize]) + other);
            }
        }
    }
    Ok(best)
}

/// Ancestry derived from tree parent pointers and member order.
pub struct Ancestry<'a> {
    hq: &'a QueryHierarchy,
}

impl<'a> Ancestry<'a> {
    pub fn new(hq: &'a QueryHierarchy) -> Self {
        Self { hq }
    }

    /// Whether `u` precedes-or-equals `x`.
    pub fn precedes(&self, u: VertexId, x: VertexId) -> bool {
        let target = self.hq.node_of(u);
        let mut node = Some(self.hq.node_of(x));
        let mut first = true;
        while let Some(id) = node {
            if id == target {
                if !first {
                    return true;
                }
                let members = &self.hq.node(id).members;
                let pu = members.iter().position(|&m| m == u).unwrap();
                let px = members.iter().position(|&m| m == x).unwrap();
                return pu <= px;
            }
            first = false;
            node = self.hq.node(id).parent;
        }
        false
    }

    /// Every `u` preceding-or-equal `x`.
    pub fn ancestors(&self, x: VertexId) -> Vec<VertexId> {
        (0..self.hq.num_vertices() as VertexId)
            .filter(|&u| self.precedes(u, x))
            .collect()
    }
}

/// Distances from `u` to every vertex, using only vertices that `u`
/// precedes. Entries outside that set stay infinite.
pub fn induced_subgraph_distances(
    graph: &Graph,
    hq: &QueryHierarchy,
    u: VertexId,
) -> Result<Vec<Distance>> {
    check(graph, u)?;
    let anc = Ancestry::new(hq);
    let inside: Vec<bool> = (0..graph.num_vertices() as VertexId)
        .map(|x| anc.precedes(u, x))
        .collect();
    Ok(search(graph, u, |y| inside[y as usize], None))
}

/// Distance between `u` and `v` inside the subgraph of vertices that `u`
/// precedes. Requires `u` to precede `v`.
pub fn induced_subgraph_distance(
    graph: &Graph,
    hq: &QueryHierarchy,
    u: VertexId,
    v: VertexId,
) -> Result<Distance> {
    check(graph, v)?;
    if !Ancestry::new(hq).precedes(u, v) {
        return Err(Error::Incomparable(u, v));
    }
    Ok(induced_subgraph_distances(graph, hq, u)?[v as usize])
}

/// Every pair joined by a path whose inner vertices are all preceded by
/// both ends, with the shortest such path length. Exhaustive; small graphs
/// only.
pub fn enumerate_valley_shortcuts(
    graph: &Graph,
    hq: &QueryHierarchy,
) -> Result<BTreeMap<(VertexId, VertexId), Distance>> {
    let n = graph.num_vertices();
    if n > VALLEY_ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "valley path enumeration",
            size: n,
            limit: VALLEY_ENUMERATION_LIMIT,
        });
    }
    let anc = Ancestry::new(hq);
    let mut found = BTreeMap::new();
    for a in 0..n as VertexId {
        let mut on_path = vec![false; n];
        on_path[a as usize] = true;
        let mut inner = Vec::new();
        extend(graph, &anc, a, a, 0, &mut on_path, &mut inner, &mut found);
    }
    Ok(found)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    graph: &Graph,
    anc: &Ancestry,
    start: VertexId,
    at: VertexId,
    length: Distance,
    on_path: &mut Vec<bool>,
    inner: &mut Vec<VertexId>,
    found: &mut BTreeMap<(VertexId, VertexId), Distance>,
) {
    for (y, w) in graph.neighbors(at) {
        if on_path[y as usize] {
            continue;
        }
        let len = length.saturating_add(w);
        if y > start && inner.iter().all(|&x| anc.precedes(y, x)) {
            let e = found.entry((start, y)).or_insert(INFINITY);
            *e = (*e).min(len);
        }
        // `y` may continue as an inner vertex only below `start`.
        if anc.precedes(start, y) {
            on_path[y as usize] = true;
            inner.push(y);
            extend(graph, anc, start, y, len, on_path, inner, found);
            inner.pop();
            on_path[y as usize] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hierarchy_q::{build_query_hierarchy, PartitionConfig};

    fn path3() -> (Graph, QueryHierarchy) {
        let g = Graph::from_arcs(3, [(0, 1, 2), (1, 2, 3)]).unwrap();
        let cfg = PartitionConfig {
            leaf_size: 1,
            ..Default::default()
        };
        let hq = build_query_hierarchy(&g, &cfg).unwrap();
        (g, hq)
    }

    #[test]
    fn path_distances() {
        let (g, _) = path3();
        assert_eq!(dijkstra_pair(&g, 0, 2).unwrap(), 5);
        assert_eq!(bidirectional_dijkstra(&g, 0, 2).unwrap(), 5);
        assert_eq!(bidirectional_dijkstra(&g, 1, 1).unwrap(), 0);
        assert_eq!(dijkstra(&g, 2).unwrap(), vec![5, 3, 0]);
        assert!(dijkstra(&g, 3).is_err());
    }

    #[test]
    fn unreachable_is_infinite() {
        let g = Graph::from_arcs(3, [(0, 1, 2)]).unwrap();
        assert_eq!(dijkstra_pair(&g, 0, 2).unwrap(), INFINITY);
        assert_eq!(bidirectional_dijkstra(&g, 2, 0).unwrap(), INFINITY);
    }

    #[test]
    fn valley_pairs_on_path() {
        let (g, hq) = path3();
        let v = enumerate_valley_shortcuts(&g, &hq).unwrap();
        assert_eq!(
            v.into_iter().collect::<Vec<_>>(),
            vec![((0, 1), 2), ((1, 2), 3)]
        );
    }

    #[test]
    fn single_edge_valley() {
        let g = Graph::from_arcs(2, [(0, 1, 9)]).unwrap();
        let hq = build_query_hierarchy(&g, &PartitionConfig::default()).unwrap();
        let v = enumerate_valley_shortcuts(&g, &hq).unwrap();
        assert_eq!(v.into_iter().collect::<Vec<_>>(), vec![((0, 1), 9)]);
    }

    #[test]
    fn induced_distance_requires_order() {
        let (g, hq) = path3();
        assert_eq!(induced_subgraph_distance(&g, &hq, 1, 0).unwrap(), 2);
        assert_eq!(induced_subgraph_distance(&g, &hq, 0, 0).unwrap(), 0);
        assert!(matches!(
            induced_subgraph_distance(&g, &hq, 0, 2),
            Err(Error::Incomparable(0, 2))
        ));
    }

    #[test]
    fn ancestry_agrees_with_hierarchy() {
        let (_, hq) = path3();
        let anc = Ancestry::new(&hq);
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(anc.precedes(u, v), hq.is_ancestor(u, v));
            }
        }
    }

    #[test]
    fn refuses_large_enumeration() {
        let g = Graph::from_arcs(13, (0..12).map(|i| (i, i + 1, 1))).unwrap();
        let hq = build_query_hierarchy(&g, &PartitionConfig::default()).unwrap();
        assert!(enumerate_valley_shortcuts(&g, &hq).is_err());
    }
}
