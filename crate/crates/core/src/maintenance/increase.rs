//! Label repair after weight increases. Entries that may have relied on an
//! old shortcut weight are recomputed from scratch; some turn out unchanged.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rustc_hash::FxHashSet;

use super::{entry_key, Counts, Seeds};
use crate::graph::{sat_add, Distance, VertexId, INFINITY};
use crate::hierarchy_q::QueryHierarchy;
use crate::hierarchy_u::{AffectedShortcut, UpdateHierarchy};
use crate::labelling::Labelling;

/// Entries of each shortcut's lower endpoint whose value was attained
/// through the shortcut's old weight.
pub(super) fn phase1(
    hq: &QueryHierarchy,
    labels: &Labelling,
    affected: &[AffectedShortcut],
) -> Seeds {
    let mut seeds = Seeds::default();
    for a in affected {
        let (v, w) = (a.lower, a.upper);
        let tw = hq.tau(w) as usize;
        if a.weight != labels.get(v, tw) {
            continue;
        }
        for i in 0..=tw {
            if sat_add(a.weight, labels.get(w, i)) == labels.get(v, i) {
                seeds.push(v, i);
            }
        }
    }
    seeds
}

/// Best value for `L(v)[i]` over upward shortcuts whose upper endpoint has
/// rank at least `i`. `read` supplies entries of column `i`.
#[inline]
pub(super) fn recompute(
    hu: &UpdateHierarchy,
    v: VertexId,
    i: usize,
    read: impl Fn(VertexId) -> Distance,
) -> Distance {
    let taus = hu.up_taus(v);
    let start = taus.partition_point(|&t| (t as usize) < i);
    let targets = &hu.up_targets(v)[start..];
    let weights = &hu.up_weights(v)[start..];
    targets
        .iter()
        .zip(weights)
        .map(|(&w, &wt)| sat_add(wt, read(w)))
        .min()
        .unwrap_or(INFINITY)
}

pub(super) fn phase2(
    hq: &QueryHierarchy,
    hu: &UpdateHierarchy,
    labels: &mut Labelling,
    seeds: Seeds,
) -> Counts {
    let mut counts = Counts {
        enqueued: seeds.len() as u64,
        ..Counts::default()
    };
    let mut queued: FxHashSet<u64> = seeds.iter().map(|(v, i)| entry_key(v, i)).collect();
    let mut heap: BinaryHeap<Reverse<(u32, VertexId, u32)>> = seeds
        .iter()
        .map(|(v, i)| Reverse((hq.tau(v), v, i as u32)))
        .collect();
    while let Some(Reverse((tv, v, i))) = heap.pop() {
        let i = i as usize;
        queued.remove(&entry_key(v, i));
        counts.popped += 1;
        let fresh = if i == tv as usize {
            0
        } else {
            recompute(hu, v, i, |w| labels.get(w, i))
        };
        let current = labels.get(v, i);
        if fresh <= current {
            continue;
        }
        let (lower, _) = hu.down(v);
        for &u in lower {
            if sat_add(labels.get(u, tv as usize), current) == labels.get(u, i)
                && queued.insert(entry_key(u, i))
            {
                heap.push(Reverse((hq.tau(u), u, i as u32)));
                counts.enqueued += 1;
            }
        }
        labels.set(v, i, fresh);
        counts.labels += 1;
    }
    counts
}
