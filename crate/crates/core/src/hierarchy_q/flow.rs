//! Minimum vertex cut between two vertex sets by unit-capacity max-flow
//! (Dinic) on the split graph: every vertex `x` becomes `in(x) -> out(x)`
//! with capacity 1, every edge becomes two infinite arcs `out -> in`.

use std::collections::VecDeque;

const INF: u32 = u32::MAX / 2;
const NONE: u32 = u32::MAX;

struct Network {
    first: Vec<u32>,
    next: Vec<u32>,
    to: Vec<u32>,
    cap: Vec<u32>,
}

impl Network {
    fn new(nodes: usize, arcs_hint: usize) -> Self {
        Self {
            first: vec![NONE; nodes],
            next: Vec::with_capacity(arcs_hint),
            to: Vec::with_capacity(arcs_hint),
            cap: Vec::with_capacity(arcs_hint),
        }
    }

    /// Adds `a -> b` with capacity `c` and its zero-capacity reverse at `arc ^ 1`.
    fn add(&mut self, a: usize, b: usize, c: u32) {
        for (from, to, cap) in [(a, b, c), (b, a, 0)] {
            self.next.push(self.first[from]);
            self.first[from] = self.to.len() as u32;
            self.to.push(to as u32);
            self.cap.push(cap);
        }
    }

    fn bfs_levels(&self, s: usize, level: &mut [u32]) {
        level.fill(NONE);
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let mut a = self.first[x];
            while a != NONE {
                let y = self.to[a as usize] as usize;
                if self.cap[a as usize] > 0 && level[y] == NONE {
                    level[y] = level[x] + 1;
                    queue.push_back(y);
                }
                a = self.next[a as usize];
            }
        }
    }

    /// Pushes one unit along a level-increasing path; `iter` holds the
    /// current arc of every node. Returns false when the level graph is
    /// exhausted.
    fn augment(
        &mut self,
        s: usize,
        t: usize,
        level: &[u32],
        iter: &mut [u32],
        path: &mut Vec<u32>,
    ) -> bool {
        path.clear();
        let mut x = s;
        loop {
            if x == t {
                for &a in path.iter() {
                    self.cap[a as usize] -= 1;
                    self.cap[(a ^ 1) as usize] += 1;
                }
                return true;
            }
            let mut advanced = false;
            while iter[x] != NONE {
                let a = iter[x] as usize;
                let y = self.to[a] as usize;
                if self.cap[a] > 0 && level[y] == level[x] + 1 {
                    path.push(a as u32);
                    x = y;
                    advanced = true;
                    break;
                }
                iter[x] = self.next[a];
            }
            if !advanced {
                // Dead end: retreat and skip the arc that led here.
                match path.pop() {
                    None => return false,
                    Some(a) => {
                        x = self.to[(a ^ 1) as usize] as usize;
                        iter[x] = self.next[iter[x] as usize];
                    }
                }
            }
        }
    }

    /// Max flow value, or anything above `limit` once it is exceeded.
    fn max_flow(&mut self, s: usize, t: usize, limit: u64) -> u64 {
        let n = self.first.len();
        let mut level = vec![NONE; n];
        let mut iter = vec![NONE; n];
        let mut path = Vec::new();
        let mut flow = 0;
        loop {
            self.bfs_levels(s, &mut level);
            if level[t] == NONE {
                return flow;
            }
            iter.copy_from_slice(&self.first);
            while self.augment(s, t, &level, &mut iter, &mut path) {
                flow += 1;
                if flow > limit {
                    return flow;
                }
            }
        }
    }
}

/// Computes a minimum vertex set separating `sources` from `sinks` in the
/// graph given by local adjacency lists. Source and sink vertices may
/// themselves be cut unless `pinned`. Returns a per-vertex mask of the cut,
/// or `None` when pinned terminals touch and no vertex cut exists.
pub(crate) fn min_vertex_cut(
    adj: &[Vec<u32>],
    sources: &[u32],
    sinks: &[u32],
    pinned: bool,
) -> Option<Vec<bool>> {
    let n = adj.len();
    let arcs: usize =
        adj.iter().map(Vec::len).sum::<usize>() * 2 + 2 * n + 2 * (sources.len() + sinks.len());
    let (s, t) = (2 * n, 2 * n + 1);
    let mut net = Network::new(2 * n + 2, arcs);
    let mut terminal = vec![false; n];
    if pinned {
        for &x in sources.iter().chain(sinks) {
            terminal[x as usize] = true;
        }
    }
    for (x, nbrs) in adj.iter().enumerate() {
        net.add(2 * x, 2 * x + 1, if terminal[x] { INF } else { 1 });
        for &y in nbrs {
            net.add(2 * x + 1, 2 * y as usize, INF);
        }
    }
    for &x in sources {
        net.add(s, 2 * x as usize, INF);
    }
    for &x in sinks {
        net.add(2 * x as usize + 1, t, INF);
    }
    // Any vertex cut has at most `n` vertices.
    if net.max_flow(s, t, n as u64) > n as u64 {
        return None;
    }

    let mut level = vec![NONE; net.first.len()];
    net.bfs_levels(s, &mut level);
    Some(
        (0..n)
            .map(|x| level[2 * x] != NONE && level[2 * x + 1] == NONE)
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn undirected(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        adj
    }

    #[test]
    fn path_cut_is_one_vertex() {
        let adj = undirected(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let cut = min_vertex_cut(&adj, &[0], &[4], false).unwrap();
        assert_eq!(cut.iter().filter(|c| **c).count(), 1);
    }

    #[test]
    fn two_disjoint_routes_need_two_cuts() {
        // 0 - 1 - 3 and 0 - 2 - 3
        let adj = undirected(4, &[(0, 1), (1, 3), (0, 2), (2, 3)]);
        let cut = min_vertex_cut(&adj, &[0], &[3], false).unwrap();
        assert_eq!(
            cut.iter().filter(|c| **c).count(),
            1,
            "terminals are cuttable"
        );
        let cut = min_vertex_cut(&adj, &[0], &[3], true).unwrap();
        assert_eq!(cut, vec![false, true, true, false]);
        let cut = min_vertex_cut(&adj, &[0, 1, 2], &[3], false).unwrap();
        assert_eq!(cut, vec![false, false, false, true]);
        assert!(min_vertex_cut(&adj, &[0, 1, 2], &[3], true).is_none());
    }

    #[test]
    fn grid_cut_separates() {
        // 3x3 grid, cut left column from right column.
        let id = |r: u32, c: u32| r * 3 + c;
        let mut edges = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                if c + 1 < 3 {
                    edges.push((id(r, c), id(r, c + 1)));
                }
                if r + 1 < 3 {
                    edges.push((id(r, c), id(r + 1, c)));
                }
            }
        }
        let adj = undirected(9, &edges);
        let cut = min_vertex_cut(&adj, &[0, 3, 6], &[2, 5, 8], false).unwrap();
        assert_eq!(cut.iter().filter(|c| **c).count(), 3);
    }

    #[test]
    fn disconnected_terminals_need_no_cut() {
        let adj = undirected(4, &[(0, 1), (2, 3)]);
        let cut = min_vertex_cut(&adj, &[0], &[3], false).unwrap();
        assert!(cut.iter().all(|c| !c));
    }
}
