//! Label repair after weight decreases. Every write is a strict
//! improvement, so the set of enqueued entries is exactly the set of
//! changed entries.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rustc_hash::FxHashSet;

use super::{entry_key, Counts, Seeds};
use crate::graph::{sat_add, VertexId};
use crate::hierarchy_q::QueryHierarchy;
use crate::hierarchy_u::{AffectedShortcut, UpdateHierarchy};
use crate::labelling::Labelling;

/// Relaxes the row of each shortcut's lower endpoint through the shortcut's
/// new weight and returns the improved entries.
pub(super) fn phase1(
    hq: &QueryHierarchy,
    labels: &mut Labelling,
    affected: &[AffectedShortcut],
) -> Seeds {
    let mut seeds = Seeds::default();
    for a in affected {
        let (v, w) = (a.lower, a.upper);
        let tw = hq.tau(w) as usize;
        if a.weight >= labels.get(v, tw) {
            continue;
        }
        for i in 0..=tw {
            let c = sat_add(a.weight, labels.get(w, i));
            if c < labels.get(v, i) {
                labels.set(v, i, c);
                seeds.push(v, i);
            }
        }
    }
    seeds
}

/// Pushes improvements to lower neighbours, shallowest rows first.
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
    let mut touched: FxHashSet<u64> = seeds.iter().map(|(v, i)| entry_key(v, i)).collect();
    let mut queued = touched.clone();
    let mut heap: BinaryHeap<Reverse<(u32, VertexId, u32)>> = seeds
        .iter()
        .map(|(v, i)| Reverse((hq.tau(v), v, i as u32)))
        .collect();
    while let Some(Reverse((tv, v, i))) = heap.pop() {
        let i = i as usize;
        queued.remove(&entry_key(v, i));
        counts.popped += 1;
        let lvi = labels.get(v, i);
        let (lower, _) = hu.down(v);
        for &u in lower {
            let c = sat_add(labels.get(u, tv as usize), lvi);
            if c < labels.get(u, i) {
                labels.set(u, i, c);
                let key = entry_key(u, i);
                touched.insert(key);
                if queued.insert(key) {
                    heap.push(Reverse((hq.tau(u), u, i as u32)));
                    counts.enqueued += 1;
                }
            }
        }
    }
    counts.labels = touched.len() as u64;
    counts
}
