//! Undirected road network with mutable edge weights.
//!
//! Vertices are dense `u32` ids in `[0, n)`. Adjacency is stored in CSR form
//! with every neighbour list sorted by id, so an edge lookup is a binary
//! search. The structure (which pairs are adjacent) never changes after
//! construction; only weights do.

use std::collections::hash_map::Entry;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

pub type VertexId = u32;
/// Edge weights as read from input files.
pub type Weight = u32;
/// Path lengths. `INFINITY` absorbs additions.
pub type Distance = u64;

pub const INFINITY: Distance = Distance::MAX;

/// Largest finite weight an update may carry. Keeps sums of any simple path
/// far below `INFINITY`.
pub const MAX_FINITE_WEIGHT: Distance = 1 << 36;

#[inline]
pub fn sat_add(a: Distance, b: Distance) -> Distance {
    a.saturating_add(b)
}

/// Counters collected while turning raw arcs into an undirected graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IngestReport {
    /// Unordered pairs that appeared with more than one distinct weight.
    pub merge_conflicts: u64,
    /// Arcs dropped because both endpoints were equal.
    pub self_loops: u64,
    /// Arcs folded into an already seen pair (either direction).
    pub merged_arcs: u64,
}

/// Per-vertex planar coordinates. Vertices without a coordinate are flagged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinates {
    xy: Vec<(i32, i32)>,
    present: Vec<bool>,
}

impl Coordinates {
    pub fn new(n: usize) -> Self {
        Self {
            xy: vec![(0, 0); n],
            present: vec![false; n],
        }
    }

    pub fn from_points(points: Vec<(i32, i32)>) -> Self {
        let present = vec![true; points.len()];
        Self {
            xy: points,
            present,
        }
    }

    pub fn len(&self) -> usize {
        self.xy.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xy.is_empty()
    }

    pub fn set(&mut self, v: VertexId, x: i32, y: i32) {
        self.xy[v as usize] = (x, y);
        self.present[v as usize] = true;
    }

    pub fn get(&self, v: VertexId) -> Option<(i32, i32)> {
        self.present[v as usize].then(|| self.xy[v as usize])
    }

    pub fn missing(&self) -> usize {
        self.present.iter().filter(|p| !**p).count()
    }

    pub fn is_complete(&self) -> bool {
        self.present.iter().all(|p| *p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
    weights: Vec<Distance>,
    external_ids: Vec<u64>,
    coords: Option<Coordinates>,
    ingest: IngestReport,
}

impl Graph {
    /// Builds an undirected graph from arcs over `[0, n)`. Self-loops are
    /// dropped; repeated pairs (in either direction) collapse to their minimum
    /// weight. External ids default to `v + 1`, matching DIMACS numbering.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, Distance)>,
    {
        let mut report = IngestReport::default();
        let mut pairs: FxHashMap<(VertexId, VertexId), (Distance, bool)> = FxHashMap::default();
        let mut order = Vec::new();
        for (u, v, w) in arcs {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(Error::VertexOutOfRange { id: x as u64, n });
                }
            }
            if w != INFINITY && w > MAX_FINITE_WEIGHT {
                return Err(Error::InvalidWeight(w));
            }
            if u == v {
                report.self_loops += 1;
                continue;
            }
            let key = (u.min(v), u.max(v));
            match pairs.entry(key) {
                Entry::Vacant(e) => {
                    e.insert((w, false));
                    order.push(key);
                }
                Entry::Occupied(mut e) => {
                    report.merged_arcs += 1;
                    let (best, conflict) = e.get_mut();
                    if *best != w && !*conflict {
                        *conflict = true;
                        report.merge_conflicts += 1;
                    }
                    *best = (*best).min(w);
                }
            }
        }
        order.sort_unstable();
        let edges = order.into_iter().map(|k| (k.0, k.1, pairs[&k].0));
        let mut g = Self::from_unique_edges(n, edges)?;
        g.ingest = report;
        Ok(g)
    }

    /// Builds from edges that are already unique unordered pairs.
    fn from_unique_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, Distance)>,
    {
        let edges: Vec<_> = edges.into_iter().collect();
        let mut degree = vec![0usize; n + 1];
        let mut total: Distance = 0;
        for &(u, v, w) in &edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
            if w != INFINITY {
                total = total.checked_add(w).ok_or(Error::WeightOverflow)?;
            }
        }
        if total == INFINITY {
            return Err(Error::WeightOverflow);
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0; offsets[n]];
        let mut weights = vec![0; offsets[n]];
        for &(u, v, w) in &edges {
            for (a, b) in [(u, v), (v, u)] {
                let slot = fill[a as usize];
                targets[slot] = b;
                weights[slot] = w;
                fill[a as usize] += 1;
            }
        }
        for v in 0..n {
            let (lo, hi) = (offsets[v], offsets[v + 1]);
            let mut adj: Vec<_> = targets[lo..hi]
                .iter()
                .copied()
                .zip(weights[lo..hi].iter().copied())
                .collect();
            adj.sort_unstable_by_key(|&(t, _)| t);
            for (k, (t, w)) in adj.into_iter().enumerate() {
                targets[lo + k] = t;
                weights[lo + k] = w;
            }
        }
        Ok(Self {
            offsets,
            targets,
            weights,
            external_ids: (1..=n as u64).collect(),
            coords: None,
            ingest: IngestReport::default(),
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn ingest_report(&self) -> IngestReport {
        self.ingest
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    /// Neighbours of `v` with current weights, in increasing id order.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, Distance)> + '_ {
        let (lo, hi) = (self.offsets[v as usize], self.offsets[v as usize + 1]);
        self.targets[lo..hi]
            .iter()
            .copied()
            .zip(self.weights[lo..hi].iter().copied())
    }

    pub fn neighbor_ids(&self, v: VertexId) -> &[VertexId] {
        &self.targets[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    /// Each undirected edge once, as `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, Distance)> + '_ {
        (0..self.num_vertices() as VertexId)
            .flat_map(move |u| self.neighbors(u).map(move |(v, w)| (u, v, w)))
            .filter(|&(u, v, _)| u < v)
    }

    fn slot(&self, u: VertexId, v: VertexId) -> Option<usize> {
        let lo = self.offsets[u as usize];
        let hi = self.offsets[u as usize + 1];
        self.targets[lo..hi].binary_search(&v).ok().map(|k| lo + k)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        (u as usize) < self.num_vertices()
            && (v as usize) < self.num_vertices()
            && self.slot(u, v).is_some()
    }

    /// Current weight of edge `(u, v)`, `None` if the pair is not adjacent.
    pub fn edge_weight(&self, u: VertexId, v: VertexId) -> Option<Distance> {
        if u as usize >= self.num_vertices() || v as usize >= self.num_vertices() {
            return None;
        }
        self.slot(u, v).map(|s| self.weights[s])
    }

    /// Sets both directions of an existing edge and returns the old weight.
    pub fn set_edge_weight(&mut self, u: VertexId, v: VertexId, w: Distance) -> Result<Distance> {
        let (a, b) = match (self.slot(u, v), self.slot(v, u)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(self.missing_edge(u, v)),
        };
        let old = self.weights[a];
        self.weights[a] = w;
        self.weights[b] = w;
        Ok(old)
    }

    pub(crate) fn missing_edge(&self, u: VertexId, v: VertexId) -> Error {
        Error::MissingEdge {
            u: self.external_id(u),
            v: self.external_id(v),
        }
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.num_vertices() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                id: v as u64,
                n: self.num_vertices(),
            })
        }
    }

    pub fn external_id(&self, v: VertexId) -> u64 {
        self.external_ids
            .get(v as usize)
            .copied()
            .unwrap_or(v as u64 + 1)
    }

    pub fn external_ids(&self) -> &[u64] {
        &self.external_ids
    }

    /// Maps an external id back to the dense internal id.
    pub fn internal_id(&self, external: u64) -> Option<VertexId> {
        // DIMACS inputs are numbered 1..=n; fall back to a scan otherwise.
        let guess = external.checked_sub(1).map(|g| g as usize);
        if let Some(g) = guess {
            if self.external_ids.get(g) == Some(&external) {
                return Some(g as VertexId);
            }
        }
        self.external_ids
            .iter()
            .position(|&e| e == external)
            .map(|p| p as VertexId)
    }

    pub fn set_external_ids(&mut self, ids: Vec<u64>) -> Result<()> {
        if ids.len() != self.num_vertices() {
            return Err(Error::Format(format!(
                "{} external ids for {} vertices",
                ids.len(),
                self.num_vertices()
            )));
        }
        self.external_ids = ids;
        Ok(())
    }

    pub fn coordinates(&self) -> Option<&Coordinates> {
        self.coords.as_ref()
    }

    pub fn set_coordinates(&mut self, coords: Coordinates) -> Result<()> {
        if coords.len() != self.num_vertices() {
            return Err(Error::Format(format!(
                "{} coordinates for {} vertices",
                coords.len(),
                self.num_vertices()
            )));
        }
        self.coords = Some(coords);
        Ok(())
    }

    pub(crate) fn set_ingest_report(&mut self, report: IngestReport) {
        self.ingest = report;
    }

    /// Full scan of the symmetric-adjacency invariant.
    pub fn is_symmetric(&self) -> bool {
        (0..self.num_vertices() as VertexId).all(|u| {
            self.neighbors(u)
                .all(|(v, w)| v != u && self.edge_weight(v, u) == Some(w))
        })
    }

    /// Classifies a batch against current weights without mutating anything.
    /// Every referenced pair must be an edge; otherwise the whole batch is
    /// rejected.
    pub fn classify(&self, batch: &UpdateBatch) -> Result<ClassifiedBatch> {
        let mut out = ClassifiedBatch::default();
        for up in batch.updates() {
            self.check_vertex(up.u)?;
            self.check_vertex(up.v)?;
            if up.new_weight != INFINITY && up.new_weight > MAX_FINITE_WEIGHT {
                return Err(Error::InvalidWeight(up.new_weight));
            }
            let old = self
                .edge_weight(up.u, up.v)
                .ok_or_else(|| self.missing_edge(up.u, up.v))?;
            let applied = WeightUpdate {
                old_weight: Some(old),
                ..*up
            };
            match up.new_weight.cmp(&old) {
                std::cmp::Ordering::Greater => out.increases.push(applied),
                std::cmp::Ordering::Less => out.decreases.push(applied),
                std::cmp::Ordering::Equal => out.noops += 1,
            }
        }
        Ok(out)
    }

    /// Writes `new_weight` for each update. Updates must reference edges.
    pub fn apply_updates(&mut self, updates: &[WeightUpdate]) -> Result<()> {
        for up in updates {
            if self.slot(up.u, up.v).is_none() {
                return Err(self.missing_edge(up.u, up.v));
            }
        }
        for up in updates {
            self.set_edge_weight(up.u, up.v, up.new_weight)?;
        }
        Ok(())
    }
}

/// One edge-weight change. `old_weight` is filled in when the change is
/// classified against a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightUpdate {
    pub u: VertexId,
    pub v: VertexId,
    pub new_weight: Distance,
    pub old_weight: Option<Distance>,
}

impl WeightUpdate {
    pub fn new(u: VertexId, v: VertexId, new_weight: Distance) -> Self {
        Self {
            u,
            v,
            new_weight,
            old_weight: None,
        }
    }
}

/// A set of weight changes with at most one change per edge. Later entries
/// for the same unordered pair replace earlier ones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UpdateBatch {
    updates: Vec<WeightUpdate>,
    collapsed: usize,
}

impl UpdateBatch {
    pub fn new<I: IntoIterator<Item = WeightUpdate>>(updates: I) -> Self {
        let mut index: FxHashMap<(VertexId, VertexId), usize> = FxHashMap::default();
        let mut out: Vec<WeightUpdate> = Vec::new();
        let mut collapsed = 0;
        for up in updates {
            let key = (up.u.min(up.v), up.u.max(up.v));
            match index.entry(key) {
                Entry::Occupied(e) => {
                    out[*e.get()] = up;
                    collapsed += 1;
                }
                Entry::Vacant(e) => {
                    e.insert(out.len());
                    out.push(up);
                }
            }
        }
        Self {
            updates: out,
            collapsed,
        }
    }

    pub fn updates(&self) -> &[WeightUpdate] {
        &self.updates
    }

    pub fn len(&self) -> usize {
        self.updates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.updates.is_empty()
    }

    /// How many entries were replaced by a later entry for the same edge.
    pub fn collapsed(&self) -> usize {
        self.collapsed
    }
}

/// A batch split by direction, with old weights recorded. No-ops are counted
/// and dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassifiedBatch {
    pub increases: Vec<WeightUpdate>,
    pub decreases: Vec<WeightUpdate>,
    pub noops: usize,
}

impl ClassifiedBatch {
    pub fn is_empty(&self) -> bool {
        self.increases.is_empty() && self.decreases.is_empty()
    }

    /// The batch that restores every old weight.
    pub fn inverse(&self) -> UpdateBatch {
        UpdateBatch::new(
            self.increases
                .iter()
                .chain(&self.decreases)
                .filter_map(|up| up.old_weight.map(|w| WeightUpdate::new(up.u, up.v, w))),
        )
    }
}

/// Validates, classifies and applies a batch to the graph in one step. The
/// graph is untouched if any update references a non-edge.
pub fn apply_batch_weights(graph: &mut Graph, batch: &UpdateBatch) -> Result<ClassifiedBatch> {
    let classified = graph.classify(batch)?;
    graph.apply_updates(&classified.increases)?;
    graph.apply_updates(&classified.decreases)?;
    Ok(classified)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_arcs(3, [(0, 1, 2), (1, 2, 3)]).unwrap()
    }

    #[test]
    fn merges_parallel_arcs_to_minimum() {
        let g = Graph::from_arcs(3, [(0, 1, 3), (0, 1, 4), (1, 0, 3)]).unwrap();
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.edge_weight(1, 0), Some(3));
        assert_eq!(g.ingest_report().merge_conflicts, 1);
        assert_eq!(g.ingest_report().merged_arcs, 2);
    }

    #[test]
    fn drops_self_loops() {
        let g = Graph::from_arcs(2, [(0, 0, 1), (0, 1, 1)]).unwrap();
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.ingest_report().self_loops, 1);
        assert!(g.is_symmetric());
    }

    #[test]
    fn rejects_out_of_range_vertex() {
        assert!(matches!(
            Graph::from_arcs(2, [(0, 2, 1)]),
            Err(Error::VertexOutOfRange { id: 2, n: 2 })
        ));
    }

    #[test]
    fn increase_is_classified_and_old_weight_recorded() {
        let mut g = Graph::from_arcs(2, [(0, 1, 5)]).unwrap();
        let batch = UpdateBatch::new([WeightUpdate::new(0, 1, 10)]);
        let c = apply_batch_weights(&mut g, &batch).unwrap();
        assert_eq!(c.increases.len(), 1);
        assert_eq!(c.increases[0].old_weight, Some(5));
        assert_eq!(g.edge_weight(1, 0), Some(10));
    }

    #[test]
    fn equal_weight_is_a_noop() {
        let mut g = Graph::from_arcs(2, [(0, 1, 5)]).unwrap();
        let c =
            apply_batch_weights(&mut g, &UpdateBatch::new([WeightUpdate::new(0, 1, 5)])).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.noops, 1);
    }

    #[test]
    fn missing_edge_rejects_whole_batch() {
        let mut g = path3();
        let before = g.clone();
        let batch = UpdateBatch::new([WeightUpdate::new(0, 1, 9), WeightUpdate::new(0, 2, 1)]);
        let err = apply_batch_weights(&mut g, &batch).unwrap_err();
        assert!(matches!(err, Error::MissingEdge { u: 1, v: 3 }));
        assert_eq!(g, before);
    }

    #[test]
    fn last_writer_wins_within_batch() {
        let b = UpdateBatch::new([
            WeightUpdate::new(0, 1, 9),
            WeightUpdate::new(1, 2, 4),
            WeightUpdate::new(1, 0, 7),
        ]);
        assert_eq!(b.len(), 2);
        assert_eq!(b.collapsed(), 1);
        assert_eq!(b.updates()[0].new_weight, 7);
    }

    #[test]
    fn doubling_then_inverse_restores_graph() {
        let mut g = path3();
        let original = g.clone();
        let doubled = UpdateBatch::new(
            g.edges()
                .map(|(u, v, w)| WeightUpdate::new(u, v, 2 * w))
                .collect::<Vec<_>>(),
        );
        let c = apply_batch_weights(&mut g, &doubled).unwrap();
        assert_eq!(c.increases.len(), 2);
        let restore = apply_batch_weights(&mut g, &c.inverse()).unwrap();
        assert_eq!(restore.decreases.len(), 2);
        assert_eq!(g, original);
    }

    #[test]
    fn infinite_weight_models_deletion() {
        let mut g = path3();
        let c = apply_batch_weights(
            &mut g,
            &UpdateBatch::new([WeightUpdate::new(1, 2, INFINITY)]),
        )
        .unwrap();
        assert_eq!(c.increases.len(), 1);
        assert_eq!(g.edge_weight(2, 1), Some(INFINITY));
        assert_eq!(sat_add(INFINITY, 5), INFINITY);
    }
}
