//! Shortcut graph over the partial order: one shortcut per pair of vertices
//! joined by a valley path, weighted by the shortest such path.
//!
//! Shortcuts are stored once, in the upward list of their deeper endpoint,
//! sorted by the rank of the upper endpoint. A shortcut's id is its index in
//! the flattened upward lists. Downward lists hold `(descendant, id)` pairs.

use std::collections::BinaryHeap;
use std::hash::{Hash, Hasher};
use std::ops::Range;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::graph::{sat_add, Distance, Graph, VertexId, WeightUpdate, INFINITY};
use crate::hierarchy_q::QueryHierarchy;

pub type ShortcutId = u32;

#[inline]
fn pair_key(a: VertexId, b: VertexId) -> u64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    (lo as u64) << 32 | hi as u64
}

/// A shortcut whose weight changed, with either its new weight (after a
/// decrease pass) or its weight before the pass (after an increase pass).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AffectedShortcut {
    pub id: ShortcutId,
    pub lower: VertexId,
    pub upper: VertexId,
    pub weight: Distance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpdateHierarchy {
    up_offsets: Vec<u32>,
    up_source: Vec<VertexId>,
    up_target: Vec<VertexId>,
    up_tau: Vec<u32>,
    weight: Vec<Distance>,
    down_offsets: Vec<u32>,
    down_source: Vec<VertexId>,
    down_id: Vec<ShortcutId>,
    pairs: FxHashMap<u64, ShortcutId>,
}

impl UpdateHierarchy {
    /// Contracts vertices from the deepest rank upwards, adding a shortcut
    /// between every two upper neighbours of the contracted vertex.
    pub fn build(graph: &Graph, hq: &QueryHierarchy) -> Result<Self> {
        let n = graph.num_vertices();
        if hq.num_vertices() != n {
            return Err(Error::InvalidHierarchy("vertex count mismatch".into()));
        }
        let mut up: Vec<Vec<(VertexId, Distance)>> = vec![Vec::new(); n];
        let mut slot: FxHashMap<u64, u32> = FxHashMap::default();
        for (u, v, w) in graph.edges() {
            let (lower, upper) = if hq.is_ancestor(u, v) {
                (v, u)
            } else if hq.is_ancestor(v, u) {
                (u, v)
            } else {
                return Err(Error::Incomparable(u, v));
            };
            slot.insert(pair_key(u, v), up[lower as usize].len() as u32);
            up[lower as usize].push((upper, w));
        }

        let mut order: Vec<VertexId> = (0..n as VertexId).collect();
        order.sort_unstable_by_key(|&v| std::cmp::Reverse(hq.tau(v)));
        for v in order {
            let mut nbrs = std::mem::take(&mut up[v as usize]);
            nbrs.sort_unstable_by_key(|&(a, _)| hq.tau(a));
            for (j, &(a, wa)) in nbrs.iter().enumerate() {
                for &(b, wb) in &nbrs[..j] {
                    let w = sat_add(wa, wb);
                    let list = &mut up[a as usize];
                    match slot.get(&pair_key(a, b)) {
                        Some(&s) => {
                            let e = &mut list[s as usize].1;
                            *e = (*e).min(w);
                        }
                        None => {
                            slot.insert(pair_key(a, b), list.len() as u32);
                            list.push((b, w));
                        }
                    }
                }
            }
            up[v as usize] = nbrs;
        }
        drop(slot);

        let mut up_offsets = Vec::with_capacity(n + 1);
        up_offsets.push(0u32);
        let total: usize = up.iter().map(Vec::len).sum();
        if total >= u32::MAX as usize {
            return Err(Error::TooLarge {
                what: "shortcut count",
                size: total,
                limit: u32::MAX as usize - 1,
            });
        }
        let mut up_source = Vec::with_capacity(total);
        let mut up_target = Vec::with_capacity(total);
        let mut up_tau = Vec::with_capacity(total);
        let mut weight = Vec::with_capacity(total);
        for (v, list) in up.into_iter().enumerate() {
            for (a, w) in list {
                up_source.push(v as VertexId);
                up_target.push(a);
                up_tau.push(hq.tau(a));
                weight.push(w);
            }
            up_offsets.push(up_target.len() as u32);
        }
        Ok(Self::assemble(
            up_offsets, up_source, up_target, up_tau, weight, n,
        ))
    }

    fn assemble(
        up_offsets: Vec<u32>,
        up_source: Vec<VertexId>,
        up_target: Vec<VertexId>,
        up_tau: Vec<u32>,
        weight: Vec<Distance>,
        n: usize,
    ) -> Self {
        let mut down_offsets = vec![0u32; n + 1];
        for &a in &up_target {
            down_offsets[a as usize + 1] += 1;
        }
        for v in 0..n {
            down_offsets[v + 1] += down_offsets[v];
        }
        let mut fill = down_offsets.clone();
        let mut down_source = vec![0; up_target.len()];
        let mut down_id = vec![0; up_target.len()];
        let mut pairs = FxHashMap::default();
        pairs.reserve(up_target.len());
        for (id, (&s, &a)) in up_source.iter().zip(&up_target).enumerate() {
            let k = fill[a as usize] as usize;
            down_source[k] = s;
            down_id[k] = id as ShortcutId;
            fill[a as usize] += 1;
            pairs.insert(pair_key(s, a), id as ShortcutId);
        }
        Self {
            up_offsets,
            up_source,
            up_target,
            up_tau,
            weight,
            down_offsets,
            down_source,
            down_id,
            pairs,
        }
    }

    /// Rebuilds from serialized upward lists. Lists must already be sorted
    /// by the rank of their targets.
    pub fn from_upward_lists(
        hq: &QueryHierarchy,
        lists: Vec<Vec<(VertexId, Distance)>>,
    ) -> Result<Self> {
        let n = hq.num_vertices();
        if lists.len() != n {
            return Err(Error::Format(format!(
                "{} upward lists for {n} vertices",
                lists.len()
            )));
        }
        let mut up_offsets = vec![0u32];
        let (mut src, mut tgt, mut tau, mut wt) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (v, list) in lists.into_iter().enumerate() {
            let mut prev: Option<u32> = None;
            for (a, w) in list {
                if a as usize >= n || !hq.is_ancestor(a, v as VertexId) || a == v as VertexId {
                    return Err(Error::Format(format!(
                        "shortcut ({v}, {a}) does not point upwards"
                    )));
                }
                let t = hq.tau(a);
                if prev.is_some_and(|p| p >= t) {
                    return Err(Error::Format(format!(
                        "upward list of vertex {v} is not sorted"
                    )));
                }
                prev = Some(t);
                src.push(v as VertexId);
                tgt.push(a);
                tau.push(t);
                wt.push(w);
            }
            up_offsets.push(tgt.len() as u32);
        }
        Ok(Self::assemble(up_offsets, src, tgt, tau, wt, n))
    }

    pub fn num_vertices(&self) -> usize {
        self.up_offsets.len() - 1
    }

    pub fn num_shortcuts(&self) -> usize {
        self.up_target.len()
    }

    /// Bytes held by the shortcut arrays (excluding the pair table).
    pub fn byte_size(&self) -> usize {
        self.num_shortcuts() * (4 * 3 + 8 + 4 * 2) + 4 * 2 * (self.num_vertices() + 1)
    }

    #[inline]
    pub fn up_range(&self, v: VertexId) -> Range<usize> {
        self.up_offsets[v as usize] as usize..self.up_offsets[v as usize + 1] as usize
    }

    /// Upper endpoints of `v`'s shortcuts, by increasing rank.
    #[inline]
    pub fn up_targets(&self, v: VertexId) -> &[VertexId] {
        &self.up_target[self.up_range(v)]
    }

    #[inline]
    pub fn up_taus(&self, v: VertexId) -> &[u32] {
        &self.up_tau[self.up_range(v)]
    }

    #[inline]
    pub fn up_weights(&self, v: VertexId) -> &[Distance] {
        &self.weight[self.up_range(v)]
    }

    /// Lower endpoints and shortcut ids of shortcuts ending at `v`.
    #[inline]
    pub fn down(&self, v: VertexId) -> (&[VertexId], &[ShortcutId]) {
        let r = self.down_offsets[v as usize] as usize..self.down_offsets[v as usize + 1] as usize;
        (&self.down_source[r.clone()], &self.down_id[r])
    }

    pub fn down_degree(&self, v: VertexId) -> usize {
        (self.down_offsets[v as usize + 1] - self.down_offsets[v as usize]) as usize
    }

    /// `(lower, upper)` endpoints of a shortcut.
    #[inline]
    pub fn endpoints(&self, id: ShortcutId) -> (VertexId, VertexId) {
        (self.up_source[id as usize], self.up_target[id as usize])
    }

    #[inline]
    pub fn weight(&self, id: ShortcutId) -> Distance {
        self.weight[id as usize]
    }

    pub fn weights(&self) -> &[Distance] {
        &self.weight
    }

    #[inline]
    pub fn shortcut_id(&self, u: VertexId, v: VertexId) -> Option<ShortcutId> {
        self.pairs.get(&pair_key(u, v)).copied()
    }

    /// Current weight of the shortcut between `u` and `v` (either order).
    #[inline]
    pub fn shortcut_weight(&self, u: VertexId, v: VertexId) -> Option<Distance> {
        self.shortcut_id(u, v).map(|id| self.weight[id as usize])
    }

    /// All shortcuts as `(lower, upper, weight)` in id order.
    pub fn shortcuts(&self) -> impl Iterator<Item = (VertexId, VertexId, Distance)> + '_ {
        (0..self.num_shortcuts()).map(|i| (self.up_source[i], self.up_target[i], self.weight[i]))
    }

    /// Hash of the shortcut pair structure, ignoring weights.
    pub fn structure_hash(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.up_offsets.hash(&mut h);
        self.up_target.hash(&mut h);
        h.finish()
    }

    /// Best route for shortcut `id` allowed by its definition: the direct
    /// edge, or two shortcuts through a common lower neighbour.
    pub fn recompute(&self, graph: &Graph, hq: &QueryHierarchy, id: ShortcutId) -> Distance {
        let (v, w) = self.endpoints(id);
        let mut best = graph.edge_weight(v, w).unwrap_or(INFINITY);
        let (dv, dvi) = self.down(v);
        let (dw, dwi) = self.down(w);
        if dv.len() <= dw.len() {
            // Lower neighbours of v lie below w as well.
            for (&x, &xv) in dv.iter().zip(dvi) {
                if let Some(xw) = self.shortcut_id(x, w) {
                    best = best.min(sat_add(self.weight(xv), self.weight(xw)));
                }
            }
        } else {
            let tv = hq.tau(v);
            for (&x, &xw) in dw.iter().zip(dwi) {
                if hq.tau(x) <= tv {
                    continue;
                }
                if let Some(xv) = self.shortcut_id(x, v) {
                    best = best.min(sat_add(self.weight(xv), self.weight(xw)));
                }
            }
        }
        best
    }

    /// First shortcut violating the minimum-weight identity, if any.
    pub fn check_minimum_weight(
        &self,
        graph: &Graph,
        hq: &QueryHierarchy,
    ) -> Option<(VertexId, VertexId)> {
        (0..self.num_shortcuts() as ShortcutId)
            .find(|&id| self.recompute(graph, hq, id) != self.weight(id))
            .map(|id| self.endpoints(id))
    }

    /// First pair of upper neighbours of a common vertex that lacks a
    /// shortcut, if any.
    pub fn check_triangle_closure(&self) -> Option<(VertexId, VertexId)> {
        for v in 0..self.num_vertices() as VertexId {
            let ts = self.up_targets(v);
            for (j, &a) in ts.iter().enumerate() {
                for &b in &ts[..j] {
                    if self.shortcut_id(a, b).is_none() {
                        return Some((a, b));
                    }
                }
            }
        }
        None
    }

    fn edge_shortcut(&self, graph: &Graph, up: &WeightUpdate) -> Result<ShortcutId> {
        self.shortcut_id(up.u, up.v)
            .ok_or_else(|| graph.missing_edge(up.u, up.v))
    }

    fn affected(&self, id: ShortcutId, weight: Distance) -> AffectedShortcut {
        let (lower, upper) = self.endpoints(id);
        AffectedShortcut {
            id,
            lower,
            upper,
            weight,
        }
    }

    /// Propagates weight decreases (already applied to `graph`) through the
    /// shortcuts, deepest first. Returns changed shortcuts with new weights.
    pub fn decrease(
        &mut self,
        graph: &Graph,
        hq: &QueryHierarchy,
        updates: &[WeightUpdate],
    ) -> Result<Vec<AffectedShortcut>> {
        let mut heap = BinaryHeap::new();
        let mut queued = FxHashSet::default();
        let mut changed = Vec::new();
        let mut seen = FxHashSet::default();
        for up in updates {
            let id = self.edge_shortcut(graph, up)?;
            if self.weight[id as usize] > up.new_weight {
                self.weight[id as usize] = up.new_weight;
                if seen.insert(id) {
                    changed.push(id);
                }
                if queued.insert(id) {
                    heap.push((hq.tau(self.up_source[id as usize]), id));
                }
            }
        }
        while let Some((_, id)) = heap.pop() {
            queued.remove(&id);
            let (v, w) = self.endpoints(id);
            let wvw = self.weight[id as usize];
            for k in self.up_range(v) {
                let x = self.up_target[k];
                if x == w {
                    continue;
                }
                let d = sat_add(wvw, self.weight[k]);
                let sid = self
                    .shortcut_id(w, x)
                    .expect("upper neighbours are joined by a shortcut");
                if self.weight[sid as usize] > d {
                    self.weight[sid as usize] = d;
                    if seen.insert(sid) {
                        changed.push(sid);
                    }
                    if queued.insert(sid) {
                        heap.push((hq.tau(self.up_source[sid as usize]), sid));
                    }
                }
            }
        }
        Ok(changed
            .into_iter()
            .map(|id| self.affected(id, self.weight[id as usize]))
            .collect())
    }

    /// Propagates weight increases (already applied to `graph`). Returns
    /// shortcuts whose weight changed, with their weights before the pass.
    pub fn increase(
        &mut self,
        graph: &Graph,
        hq: &QueryHierarchy,
        updates: &[WeightUpdate],
    ) -> Result<Vec<AffectedShortcut>> {
        let mut heap = BinaryHeap::new();
        let mut queued = FxHashSet::default();
        let mut old: FxHashMap<ShortcutId, Distance> = FxHashMap::default();
        let mut changed = Vec::new();
        for up in updates {
            let id = self.edge_shortcut(graph, up)?;
            let before = up.old_weight.ok_or_else(|| {
                Error::InvalidHierarchy("increase without a recorded old weight".into())
            })?;
            if self.weight[id as usize] == before && queued.insert(id) {
                heap.push((hq.tau(self.up_source[id as usize]), id));
            }
        }
        while let Some((_, id)) = heap.pop() {
            queued.remove(&id);
            let fresh = self.recompute(graph, hq, id);
            let current = self.weight[id as usize];
            if fresh == current {
                continue;
            }
            let (v, w) = self.endpoints(id);
            for k in self.up_range(v) {
                let x = self.up_target[k];
                if x == w {
                    continue;
                }
                let sid = self
                    .shortcut_id(w, x)
                    .expect("upper neighbours are joined by a shortcut");
                if self.weight[sid as usize] == sat_add(current, self.weight[k])
                    && queued.insert(sid)
                {
                    heap.push((hq.tau(self.up_source[sid as usize]), sid));
                }
            }
            if let std::collections::hash_map::Entry::Vacant(e) = old.entry(id) {
                e.insert(current);
                changed.push(id);
            }
            self.weight[id as usize] = fresh;
        }
        Ok(changed
            .into_iter()
            .filter(|id| old[id] != self.weight[*id as usize])
            .map(|id| self.affected(id, old[&id]))
            .collect())
    }
}
