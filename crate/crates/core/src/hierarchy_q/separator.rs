//! Balanced vertex separators.
//!
//! A separator `S` of an `m`-vertex subgraph is accepted when the components
//! left after removing `S` can be packed into two non-empty sides of at most
//! `(1 - β)·m` vertices each. Components are packed greedily, largest first,
//! into the currently smaller side.
//!
//! Candidates come from inertial flow when coordinates are available (four
//! projection axes, a min vertex cut between the outer quarters of each
//! ordering) and otherwise from BFS level sets refined by local moves plus a
//! min cut between the ends of the BFS ordering. The smallest balanced
//! candidate wins.

use std::collections::VecDeque;

use super::flow::min_vertex_cut;
use crate::graph::{Graph, VertexId};

/// Result of one bisection step. All three lists are sorted by vertex id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separator {
    pub separator: Vec<VertexId>,
    pub left: Vec<VertexId>,
    pub right: Vec<VertexId>,
}

/// How many BFS levels are refined and evaluated per call.
const LEVEL_CANDIDATES: usize = 8;

struct Local<'a> {
    ids: &'a [VertexId],
    adj: Vec<Vec<u32>>,
}

impl<'a> Local<'a> {
    /// `ids` must be sorted; local ids follow the same order.
    fn new(graph: &Graph, ids: &'a [VertexId]) -> Self {
        let adj = ids
            .iter()
            .map(|&v| {
                graph
                    .neighbor_ids(v)
                    .iter()
                    .filter_map(|w| ids.binary_search(w).ok().map(|x| x as u32))
                    .collect()
            })
            .collect();
        Self { ids, adj }
    }

    fn len(&self) -> usize {
        self.ids.len()
    }

    /// Connected components avoiding `removed`, each listed from its smallest
    /// local id.
    fn components(&self, removed: &[bool]) -> Vec<Vec<u32>> {
        let mut seen = removed.to_vec();
        let mut comps = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start as u32);
            let mut comp = Vec::new();
            while let Some(x) = queue.pop_front() {
                comp.push(x);
                for &y in &self.adj[x as usize] {
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        queue.push_back(y);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// BFS distances from `root` inside `within`, plus the visit order.
    fn bfs(&self, root: u32, within: &[bool]) -> (Vec<u32>, Vec<u32>) {
        let mut dist = vec![u32::MAX; self.len()];
        let mut order = Vec::new();
        dist[root as usize] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &y in &self.adj[x as usize] {
                if within[y as usize] && dist[y as usize] == u32::MAX {
                    dist[y as usize] = dist[x as usize] + 1;
                    queue.push_back(y);
                }
            }
        }
        (dist, order)
    }
}

struct Candidate {
    sep: Vec<u32>,
    left: Vec<u32>,
    right: Vec<u32>,
    max_side: usize,
}

impl Candidate {
    fn key(&self) -> (usize, usize) {
        (self.sep.len(), self.max_side)
    }
}

/// Packs components into two sides; `None` unless both sides are non-empty
/// and within `bound`.
fn pack(mut comps: Vec<Vec<u32>>, bound: f64) -> Option<(Vec<u32>, Vec<u32>)> {
    comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for comp in comps {
        if left.len() <= right.len() {
            left.extend(comp);
        } else {
            right.extend(comp);
        }
    }
    let ok = !left.is_empty()
        && !right.is_empty()
        && left.len() as f64 <= bound
        && right.len() as f64 <= bound;
    ok.then_some((left, right))
}

fn evaluate(local: &Local, sep_mask: &[bool], bound: f64) -> Option<Candidate> {
    let sep: Vec<u32> = (0..local.len() as u32)
        .filter(|&x| sep_mask[x as usize])
        .collect();
    if sep.is_empty() {
        return None;
    }
    let (left, right) = pack(local.components(sep_mask), bound)?;
    let max_side = left.len().max(right.len());
    Some(Candidate {
        sep,
        left,
        right,
        max_side,
    })
}

fn better(best: &mut Option<Candidate>, cand: Option<Candidate>) {
    if let Some(c) = cand {
        if best.as_ref().is_none_or(|b| c.key() < b.key()) {
            *best = Some(c);
        }
    }
}

/// Min vertex cut between the first and last quarter of `order`. The
/// terminals themselves may be cut; if that cut does not split the
/// component, the cut is retried with the terminals pinned.
fn slab_cut(local: &Local, comp_mask: &[bool], order: &[u32], bound: f64) -> Option<Candidate> {
    let slab = (order.len() / 4).max(1);
    let (sources, sinks) = (&order[..slab], &order[order.len() - slab..]);
    // Restrict adjacency to the component; other vertices stay isolated.
    let adj: Vec<Vec<u32>> = (0..local.len())
        .map(|x| {
            if comp_mask[x] {
                local.adj[x].clone()
            } else {
                Vec::new()
            }
        })
        .collect();
    let cut = min_vertex_cut(&adj, sources, sinks, false)?;
    if let Some(c) = evaluate(local, &cut, bound) {
        return Some(c);
    }
    let cut = min_vertex_cut(&adj, sources, sinks, true)?;
    evaluate(local, &cut, bound)
}

fn pseudo_peripheral(local: &Local, comp: &[u32], comp_mask: &[bool]) -> (u32, Vec<u32>, Vec<u32>) {
    let mut root = comp[0];
    let (mut dist, mut order) = local.bfs(root, comp_mask);
    let mut ecc = dist[*order.last().unwrap() as usize];
    for _ in 0..4 {
        let far = *order
            .iter()
            .filter(|&&x| dist[x as usize] == ecc)
            .min()
            .unwrap();
        let (d2, o2) = local.bfs(far, comp_mask);
        let e2 = d2[*o2.last().unwrap() as usize];
        if e2 <= ecc {
            break;
        }
        (root, dist, order, ecc) = (far, d2, o2, e2);
    }
    (root, dist, order)
}

/// Moves separator vertices that touch only one side onto that side.
fn refine(local: &Local, side: &mut [u8], bound: f64) {
    const A: u8 = 1;
    const S: u8 = 2;
    const B: u8 = 3;
    let mut count_a = side.iter().filter(|&&s| s == A).count();
    let mut count_b = side.iter().filter(|&&s| s == B).count();
    let mut count_s = side.iter().filter(|&&s| s == S).count();
    loop {
        let mut changed = false;
        for x in 0..local.len() {
            if side[x] != S || count_s == 1 {
                continue;
            }
            let touches = |t: u8| local.adj[x].iter().any(|&y| side[y as usize] == t);
            if !touches(B) && (count_a + 1) as f64 <= bound {
                side[x] = A;
                count_a += 1;
            } else if !touches(A) && (count_b + 1) as f64 <= bound {
                side[x] = B;
                count_b += 1;
            } else {
                continue;
            }
            count_s -= 1;
            changed = true;
        }
        if !changed {
            break;
        }
    }
}

fn level_candidates(
    local: &Local,
    comp_mask: &[bool],
    dist: &[u32],
    bound: f64,
    best: &mut Option<Candidate>,
) {
    let layers = dist
        .iter()
        .zip(comp_mask)
        .filter(|(_, &m)| m)
        .map(|(&d, _)| d as usize + 1)
        .max()
        .unwrap_or(0);
    let mut size = vec![0usize; layers];
    for (x, &d) in dist.iter().enumerate() {
        if comp_mask[x] {
            size[d as usize] += 1;
        }
    }
    let total: usize = size.iter().sum();
    let mut before = 0;
    let mut picks = Vec::new();
    for (j, &s) in size.iter().enumerate() {
        let after = total - before - s;
        if before > 0 && after > 0 && before as f64 <= bound && after as f64 <= bound {
            picks.push((s, before.abs_diff(after), j));
        }
        before += s;
    }
    picks.sort_unstable();
    for &(_, _, j) in picks.iter().take(LEVEL_CANDIDATES) {
        let mut side: Vec<u8> = (0..local.len())
            .map(|x| {
                if !comp_mask[x] {
                    0
                } else {
                    match (dist[x] as usize).cmp(&j) {
                        std::cmp::Ordering::Less => 1,
                        std::cmp::Ordering::Equal => 2,
                        std::cmp::Ordering::Greater => 3,
                    }
                }
            })
            .collect();
        refine(local, &mut side, bound);
        let mask: Vec<bool> = side.iter().map(|&s| s == 2).collect();
        better(best, evaluate(local, &mask, bound));
    }
}

/// Splits the subgraph induced by `vertices` (sorted, at least two) into a
/// separator and two sides. Never fails: if no balanced candidate is found,
/// every vertex but one goes into the separator.
pub fn find_separator(
    graph: &Graph,
    vertices: &[VertexId],
    beta: f64,
    use_coordinates: bool,
) -> Separator {
    debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
    let local = Local::new(graph, vertices);
    let m = local.len();
    let bound = (1.0 - beta) * m as f64;
    let to_global = |xs: Vec<u32>| -> Vec<VertexId> {
        let mut out: Vec<VertexId> = xs.into_iter().map(|x| vertices[x as usize]).collect();
        out.sort_unstable();
        out
    };
    let finish = |c: Candidate| Separator {
        separator: to_global(c.sep),
        left: to_global(c.left),
        right: to_global(c.right),
    };

    let mut comps = local.components(&vec![false; m]);
    if comps.len() > 1 {
        // Pull one vertex off the smallest component and see whether the
        // rest packs on its own.
        let smallest = comps
            .iter()
            .min_by(|a, b| a.len().cmp(&b.len()).then(a[0].cmp(&b[0])))
            .unwrap();
        let mut mask = vec![false; m];
        mask[smallest[0] as usize] = true;
        if let Some(c) = evaluate(&local, &mask, bound) {
            return finish(c);
        }
    }
    comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let comp = &comps[0];
    let mut comp_mask = vec![false; m];
    for &x in comp {
        comp_mask[x as usize] = true;
    }

    let mut best: Option<Candidate> = None;
    let coords = graph
        .coordinates()
        .filter(|c| use_coordinates && comp.iter().all(|&x| c.get(vertices[x as usize]).is_some()));
    if let Some(coords) = coords {
        let xy: Vec<(i64, i64)> = comp
            .iter()
            .map(|&x| {
                let (a, b) = coords.get(vertices[x as usize]).unwrap();
                (a as i64, b as i64)
            })
            .collect();
        let axes: [fn(i64, i64) -> i64; 4] = [|x, _| x, |_, y| y, |x, y| x + y, |x, y| x - y];
        for axis in axes {
            let mut order: Vec<(i64, u32)> = comp
                .iter()
                .zip(&xy)
                .map(|(&x, &(a, b))| (axis(a, b), x))
                .collect();
            order.sort_unstable();
            let order: Vec<u32> = order.into_iter().map(|(_, x)| x).collect();
            better(&mut best, slab_cut(&local, &comp_mask, &order, bound));
        }
    } else {
        let (_, dist, order) = pseudo_peripheral(&local, comp, &comp_mask);
        level_candidates(&local, &comp_mask, &dist, bound, &mut best);
        better(&mut best, slab_cut(&local, &comp_mask, &order, bound));
    }

    match best {
        Some(c) => finish(c),
        None => Separator {
            separator: vertices[..m - 1].to_vec(),
            left: vec![vertices[m - 1]],
            right: Vec::new(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Coordinates;

    fn unit(n: usize, edges: &[(u32, u32)]) -> Graph {
        Graph::from_arcs(n, edges.iter().map(|&(a, b)| (a, b, 1))).unwrap()
    }

    fn all(n: usize) -> Vec<VertexId> {
        (0..n as VertexId).collect()
    }

    #[test]
    fn path_of_three() {
        let g = unit(3, &[(0, 1), (1, 2)]);
        let s = find_separator(&g, &all(3), 0.2, true);
        assert_eq!(s.separator, vec![1]);
        assert_eq!((s.left.len(), s.right.len()), (1, 1));
    }

    #[test]
    fn square_uses_a_diagonal() {
        // 0 - 1
        // |   |
        // 2 - 3
        let g = unit(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        for coords in [false, true] {
            let mut g = g.clone();
            if coords {
                g.set_coordinates(Coordinates::from_points(vec![
                    (0, 0),
                    (1, 0),
                    (0, 1),
                    (1, 1),
                ]))
                .unwrap();
            }
            let s = find_separator(&g, &all(4), 0.2, true);
            assert!(
                s.separator == vec![0, 3] || s.separator == vec![1, 2],
                "{s:?}"
            );
            assert_eq!((s.left.len(), s.right.len()), (1, 1));
        }
    }

    #[test]
    fn star_splits_at_centre() {
        let g = unit(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let s = find_separator(&g, &all(5), 0.2, true);
        assert_eq!(s.separator, vec![0]);
        assert_eq!((s.left.len(), s.right.len()), (2, 2));
    }

    #[test]
    fn disconnected_pieces_pack_without_a_cut() {
        let g = unit(6, &[(0, 1), (1, 2), (3, 4), (4, 5)]);
        let s = find_separator(&g, &all(6), 0.2, true);
        assert_eq!(s.separator.len(), 1);
        assert!(s.left.len() as f64 <= 0.8 * 6.0 && s.right.len() as f64 <= 0.8 * 6.0);
    }

    #[test]
    fn complete_graph_falls_back_to_trivial() {
        let mut edges = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push((a, b));
            }
        }
        let g = unit(4, &edges);
        let s = find_separator(&g, &all(4), 0.2, true);
        assert_eq!(s.separator.len(), 3);
        assert_eq!(s.left.len() + s.right.len(), 1);
    }

    #[test]
    fn grid_separator_is_small_and_separates() {
        let side = 12u32;
        let mut edges = Vec::new();
        let mut pts = Vec::new();
        for r in 0..side {
            for c in 0..side {
                pts.push((c as i32, r as i32));
                if c + 1 < side {
                    edges.push((r * side + c, r * side + c + 1));
                }
                if r + 1 < side {
                    edges.push((r * side + c, (r + 1) * side + c));
                }
            }
        }
        let n = (side * side) as usize;
        let mut g = unit(n, &edges);
        for coords in [false, true] {
            if coords {
                g.set_coordinates(Coordinates::from_points(pts.clone()))
                    .unwrap();
            }
            let s = find_separator(&g, &all(n), 0.2, true);
            assert!(
                s.separator.len() <= side as usize + 2,
                "{coords}: {}",
                s.separator.len()
            );
            let left: std::collections::HashSet<_> = s.left.iter().collect();
            for (u, v, _) in g.edges() {
                let (lu, lv) = (left.contains(&u), left.contains(&v));
                let (ru, rv) = (s.right.contains(&u), s.right.contains(&v));
                assert!(!(lu && rv) && !(ru && lv));
            }
        }
    }
}
