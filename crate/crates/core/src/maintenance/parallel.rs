//! Column-parallel phase 2.
//!
//! Work items are grouped by label column `i` and columns are dealt to
//! workers by `i mod W`. Inside a column, rows are processed in increasing
//! rank. A worker reads shortcut weights (fixed during phase 2) and entries
//! of its own columns only, and writes entries of its own columns only.
//! Descendant tests use the shortcut weight `ω(u, v)` instead of the entry
//! `L(u)[τ(v)]`, which lives in another column.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::marker::PhantomData;

use rustc_hash::{FxHashMap, FxHashSet};

use super::increase::recompute;
use super::{Counts, Seeds};
use crate::exec::{map_collect, Execution};
use crate::graph::{sat_add, Distance, VertexId};
use crate::hierarchy_q::QueryHierarchy;
use crate::hierarchy_u::UpdateHierarchy;
use crate::labelling::Labelling;

/// Shared access to label entries, partitioned by column.
struct Columns<'a> {
    offsets: &'a [u64],
    ptr: *mut Distance,
    len: usize,
    _marker: PhantomData<&'a mut [Distance]>,
}

// SAFETY: workers only touch entries of the columns they own (see `get` and
// `set`), so no entry is accessed from two threads.
unsafe impl Send for Columns<'_> {}
unsafe impl Sync for Columns<'_> {}

impl<'a> Columns<'a> {
    fn new(labels: &'a mut Labelling) -> Self {
        let (offsets, entries) = labels.split_mut();
        Self {
            offsets,
            ptr: entries.as_mut_ptr(),
            len: entries.len(),
            _marker: PhantomData,
        }
    }

    #[inline]
    fn index(&self, v: VertexId, i: usize) -> usize {
        let at = self.offsets[v as usize] as usize + i;
        debug_assert!(at < self.offsets[v as usize + 1] as usize && at < self.len);
        at
    }

    /// # Safety
    /// The calling worker must own column `i` for the duration of phase 2.
    #[inline]
    unsafe fn get(&self, v: VertexId, i: usize) -> Distance {
        *self.ptr.add(self.index(v, i))
    }

    /// # Safety
    /// As for [`Columns::get`].
    #[inline]
    unsafe fn set(&self, v: VertexId, i: usize, d: Distance) {
        *self.ptr.add(self.index(v, i)) = d;
    }
}

/// Seeds grouped into per-column lists and dealt into `workers` shards.
fn shard(seeds: &Seeds, workers: usize) -> Vec<Vec<(usize, Vec<VertexId>)>> {
    let mut by_column: FxHashMap<usize, Vec<VertexId>> = FxHashMap::default();
    for (v, i) in seeds.iter() {
        by_column.entry(i).or_default().push(v);
    }
    let mut columns: Vec<(usize, Vec<VertexId>)> = by_column.into_iter().collect();
    columns.sort_unstable_by_key(|c| c.0);
    let mut shards = vec![Vec::new(); workers];
    for col in columns {
        shards[col.0 % workers].push(col);
    }
    shards
}

fn run_shards<F>(execution: Execution, workers: usize, seeds: Seeds, column: F) -> Counts
where
    F: Fn(usize, &[VertexId]) -> Counts + Sync + Send,
{
    let shards = shard(&seeds, workers.max(1));
    drop(seeds);
    let per_shard = execution.install(|| {
        map_collect(true, &shards, |cols| {
            let mut c = Counts::default();
            for (i, vs) in cols {
                c += column(*i, vs);
            }
            c
        })
    });
    let mut total = Counts::default();
    for c in per_shard {
        total += c;
    }
    total
}

fn column_heap(
    hq: &QueryHierarchy,
    vs: &[VertexId],
) -> (BinaryHeap<Reverse<(u32, VertexId)>>, FxHashSet<VertexId>) {
    let heap = vs.iter().map(|&v| Reverse((hq.tau(v), v))).collect();
    (heap, vs.iter().copied().collect())
}

pub(super) fn decrease_phase2(
    hq: &QueryHierarchy,
    hu: &UpdateHierarchy,
    labels: &mut Labelling,
    seeds: Seeds,
    execution: Execution,
    workers: usize,
) -> Counts {
    let cols = Columns::new(labels);
    run_shards(execution, workers, seeds, |i, vs| {
        let (mut heap, mut queued) = column_heap(hq, vs);
        let mut touched = queued.clone();
        let mut counts = Counts {
            enqueued: vs.len() as u64,
            ..Counts::default()
        };
        while let Some(Reverse((_, v))) = heap.pop() {
            queued.remove(&v);
            counts.popped += 1;
            // SAFETY: this closure is the only one handling column `i`.
            let lvi = unsafe { cols.get(v, i) };
            let (lower, ids) = hu.down(v);
            for (&u, &id) in lower.iter().zip(ids) {
                let c = sat_add(hu.weight(id), lvi);
                unsafe {
                    if c < cols.get(u, i) {
                        cols.set(u, i, c);
                        touched.insert(u);
                        if queued.insert(u) {
                            heap.push(Reverse((hq.tau(u), u)));
                            counts.enqueued += 1;
                        }
                    }
                }
            }
        }
        counts.labels = touched.len() as u64;
        counts
    })
}

pub(super) fn increase_phase2(
    hq: &QueryHierarchy,
    hu: &UpdateHierarchy,
    labels: &mut Labelling,
    seeds: Seeds,
    execution: Execution,
    workers: usize,
) -> Counts {
    let cols = Columns::new(labels);
    run_shards(execution, workers, seeds, |i, vs| {
        let (mut heap, mut queued) = column_heap(hq, vs);
        let mut counts = Counts {
            enqueued: vs.len() as u64,
            ..Counts::default()
        };
        while let Some(Reverse((tv, v))) = heap.pop() {
            queued.remove(&v);
            counts.popped += 1;
            // SAFETY: this closure is the only one handling column `i`, and
            // `recompute` reads column `i` only.
            unsafe {
                let fresh = if i == tv as usize {
                    0
                } else {
                    recompute(hu, v, i, |w| cols.get(w, i))
                };
                let current = cols.get(v, i);
                if fresh <= current {
                    continue;
                }
                let (lower, ids) = hu.down(v);
                for (&u, &id) in lower.iter().zip(ids) {
                    if sat_add(hu.weight(id), current) == cols.get(u, i) && queued.insert(u) {
                        heap.push(Reverse((hq.tau(u), u)));
                        counts.enqueued += 1;
                    }
                }
                cols.set(v, i, fresh);
            }
            counts.labels += 1;
        }
        counts
    })
}
