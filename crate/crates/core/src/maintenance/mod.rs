//! Incremental repair of shortcut weights and labels after edge-weight
//! changes.
//!
//! Each pass has two phases. Phase 1 repairs the shortcuts and seeds the
//! label entries that depend directly on a changed shortcut. Phase 2 pushes
//! those changes down to descendants in increasing rank order. The parallel
//! variants split phase 2 by label column, which only ever reads and writes
//! entries of its own column.

mod decrease;
mod increase;
mod parallel;

use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::exec::Execution;
use rustc_hash::FxHashSet;

use crate::graph::{Graph, VertexId, WeightUpdate};
use crate::hierarchy_q::QueryHierarchy;
use crate::hierarchy_u::{AffectedShortcut, UpdateHierarchy};
use crate::labelling::Labelling;

/// Work done by one maintenance pass (or the sum over several).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MaintenanceReport {
    /// Updated edges whose weight actually changed.
    #[serde(rename = "E_delta")]
    pub edges: u64,
    /// Shortcuts whose weight changed.
    #[serde(rename = "S_delta")]
    pub shortcuts: u64,
    /// Label entries whose value changed.
    #[serde(rename = "L_delta")]
    pub labels: u64,
    pub popped: u64,
    pub enqueued: u64,
    pub phase1_ns: u64,
    pub phase2_ns: u64,
}

impl MaintenanceReport {
    pub const CSV_HEADER: &'static str =
        "E_delta,S_delta,L_delta,popped,enqueued,phase1_ns,phase2_ns";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.edges,
            self.shortcuts,
            self.labels,
            self.popped,
            self.enqueued,
            self.phase1_ns,
            self.phase2_ns
        )
    }

    pub fn merge(&mut self, other: &MaintenanceReport) {
        self.edges += other.edges;
        self.shortcuts += other.shortcuts;
        self.labels += other.labels;
        self.popped += other.popped;
        self.enqueued += other.enqueued;
        self.phase1_ns += other.phase1_ns;
        self.phase2_ns += other.phase2_ns;
    }

    /// The same report with timings zeroed, for comparing runs.
    pub fn counts(&self) -> MaintenanceReport {
        MaintenanceReport {
            phase1_ns: 0,
            phase2_ns: 0,
            ..*self
        }
    }

    pub fn total_ns(&self) -> u64 {
        self.phase1_ns + self.phase2_ns
    }
}

/// Queue statistics from a label pass.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Counts {
    pub labels: u64,
    pub popped: u64,
    pub enqueued: u64,
}

impl std::ops::AddAssign for Counts {
    fn add_assign(&mut self, o: Counts) {
        self.labels += o.labels;
        self.popped += o.popped;
        self.enqueued += o.enqueued;
    }
}

#[inline]
pub(crate) fn entry_key(v: u32, i: usize) -> u64 {
    (v as u64) << 32 | i as u64
}

/// Everything a maintenance pass touches.
pub struct IndexParts<'a> {
    pub graph: &'a Graph,
    pub hq: &'a QueryHierarchy,
    pub hu: &'a mut UpdateHierarchy,
    pub labels: &'a mut Labelling,
}

fn report(
    edges: usize,
    affected: &[AffectedShortcut],
    counts: Counts,
    t0: Instant,
    t1: Instant,
) -> MaintenanceReport {
    let t2 = Instant::now();
    MaintenanceReport {
        edges: edges as u64,
        shortcuts: affected.len() as u64,
        labels: counts.labels,
        popped: counts.popped,
        enqueued: counts.enqueued,
        phase1_ns: (t1 - t0).as_nanos() as u64,
        phase2_ns: (t2 - t1).as_nanos() as u64,
    }
}

/// Repairs shortcuts and labels after weight decreases that have already
/// been written to `parts.graph`.
pub fn maintain_decrease(
    parts: IndexParts<'_>,
    updates: &[WeightUpdate],
    execution: Execution,
) -> Result<MaintenanceReport> {
    let IndexParts {
        graph,
        hq,
        hu,
        labels,
    } = parts;
    if updates.is_empty() {
        return Ok(MaintenanceReport::default());
    }
    let t0 = Instant::now();
    let affected = hu.decrease(graph, hq, updates)?;
    let seeds = decrease::phase1(hq, labels, &affected);
    let t1 = Instant::now();
    let counts = match execution {
        Execution::Sequential => decrease::phase2(hq, hu, labels, seeds),
        Execution::Parallel { workers } => {
            parallel::decrease_phase2(hq, hu, labels, seeds, execution, workers)
        }
    };
    Ok(report(updates.len(), &affected, counts, t0, t1))
}

/// Repairs shortcuts and labels after weight increases that have already
/// been written to `parts.graph`. Updates must carry their old weights.
pub fn maintain_increase(
    parts: IndexParts<'_>,
    updates: &[WeightUpdate],
    execution: Execution,
) -> Result<MaintenanceReport> {
    let IndexParts {
        graph,
        hq,
        hu,
        labels,
    } = parts;
    if updates.is_empty() {
        return Ok(MaintenanceReport::default());
    }
    let t0 = Instant::now();
    let affected = hu.increase(graph, hq, updates)?;
    let seeds = increase::phase1(hq, labels, &affected);
    let t1 = Instant::now();
    let counts = match execution {
        Execution::Sequential => increase::phase2(hq, hu, labels, seeds),
        Execution::Parallel { workers } => {
            parallel::increase_phase2(hq, hu, labels, seeds, execution, workers)
        }
    };
    Ok(report(updates.len(), &affected, counts, t0, t1))
}

/// Label entries queued by phase 1, deduplicated, in discovery order.
#[derive(Debug, Default)]
pub(crate) struct Seeds {
    entries: Vec<(VertexId, u32)>,
    seen: FxHashSet<u64>,
}

impl Seeds {
    fn push(&mut self, v: VertexId, i: usize) {
        if self.seen.insert(entry_key(v, i)) {
            self.entries.push((v, i as u32));
        }
    }

    fn len(&self) -> usize {
        self.entries.len()
    }

    fn iter(&self) -> impl Iterator<Item = (VertexId, usize)> + '_ {
        self.entries.iter().map(|&(v, i)| (v, i as usize))
    }
}
