//! Per-vertex distance arrays to every ancestor, stored back to back.
//!
//! `L(v)[i]` is the shortest distance between `v` and its rank-`i` ancestor
//! `u` using only vertices that `u` precedes. A query takes the minimum of
//! `L(s)[i] + L(t)[i]` over the common ancestors of `s` and `t`.

use crate::error::{Error, Result};
use crate::exec::{map_collect, Execution};
use crate::graph::{sat_add, Distance, VertexId, INFINITY};
use crate::hierarchy_q::QueryHierarchy;
use crate::hierarchy_u::UpdateHierarchy;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labelling {
    offsets: Vec<u64>,
    entries: Vec<Distance>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LabelStats {
    pub entries: u64,
    pub bytes: u64,
    pub max_len: usize,
}

/// Levels with fewer vertices than this are filled on the calling thread.
const PARALLEL_LEVEL: usize = 256;

impl Labelling {
    fn layout(hq: &QueryHierarchy) -> Vec<u64> {
        let mut offsets = Vec::with_capacity(hq.num_vertices() + 1);
        offsets.push(0u64);
        let mut total = 0u64;
        for &t in hq.taus() {
            total += t as u64 + 1;
            offsets.push(total);
        }
        offsets
    }

    /// Fills labels rank by rank: a vertex's row is the best of each upward
    /// shortcut followed by the upper endpoint's (finished) row.
    pub fn build(hq: &QueryHierarchy, hu: &UpdateHierarchy, execution: Execution) -> Self {
        let offsets = Self::layout(hq);
        let mut labels = Self {
            entries: vec![INFINITY; *offsets.last().unwrap() as usize],
            offsets,
        };
        let levels = hq.levels();
        execution.install(|| {
            for level in &levels {
                if execution.is_parallel() && level.len() >= PARALLEL_LEVEL {
                    let rows = map_collect(true, level, |&v| labels.compute_row(hq, hu, v));
                    for (&v, row) in level.iter().zip(rows) {
                        labels.row_mut(v).copy_from_slice(&row);
                    }
                } else {
                    for &v in level {
                        let row = labels.compute_row(hq, hu, v);
                        labels.row_mut(v).copy_from_slice(&row);
                    }
                }
            }
        });
        labels
    }

    fn compute_row(&self, hq: &QueryHierarchy, hu: &UpdateHierarchy, v: VertexId) -> Vec<Distance> {
        let tv = hq.tau(v) as usize;
        let mut row = vec![INFINITY; tv + 1];
        row[tv] = 0;
        for ((&w, &tw), &weight) in hu
            .up_targets(v)
            .iter()
            .zip(hu.up_taus(v))
            .zip(hu.up_weights(v))
        {
            let lw = self.row(w);
            let tw = tw as usize;
            for (r, &d) in row[..=tw].iter_mut().zip(lw) {
                let c = sat_add(weight, d);
                if c < *r {
                    *r = c;
                }
            }
        }
        row
    }

    /// Assembles a labelling from raw parts, checking the layout against `hq`.
    pub fn from_parts(
        hq: &QueryHierarchy,
        offsets: Vec<u64>,
        entries: Vec<Distance>,
    ) -> Result<Self> {
        if offsets != Self::layout(hq) {
            return Err(Error::Format(
                "label offsets do not match the hierarchy ranks".into(),
            ));
        }
        if *offsets.last().unwrap() as usize != entries.len() {
            return Err(Error::Format(
                "label entry count does not match offsets".into(),
            ));
        }
        Ok(Self { offsets, entries })
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn entries(&self) -> &[Distance] {
        &self.entries
    }

    /// Offsets and a mutable view of the entries at the same time.
    pub(crate) fn split_mut(&mut self) -> (&[u64], &mut [Distance]) {
        (&self.offsets, &mut self.entries)
    }

    #[inline]
    pub fn row(&self, v: VertexId) -> &[Distance] {
        &self.entries[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }

    #[inline]
    pub(crate) fn row_mut(&mut self, v: VertexId) -> &mut [Distance] {
        &mut self.entries[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }

    #[inline]
    pub(crate) fn get(&self, v: VertexId, i: usize) -> Distance {
        self.entries[self.offsets[v as usize] as usize + i]
    }

    #[inline]
    pub(crate) fn set(&mut self, v: VertexId, i: usize, d: Distance) {
        self.entries[self.offsets[v as usize] as usize + i] = d;
    }

    pub fn entry(&self, v: VertexId, i: usize) -> Result<Distance> {
        let row = self.row(v);
        row.get(i).copied().ok_or(Error::LabelPosition {
            v,
            i,
            len: row.len(),
        })
    }

    /// Overwrites one entry. Only useful for fault injection in tests.
    pub fn set_entry(&mut self, v: VertexId, i: usize, d: Distance) -> Result<()> {
        let len = self.row(v).len();
        if i >= len {
            return Err(Error::LabelPosition { v, i, len });
        }
        self.set(v, i, d);
        Ok(())
    }

    #[inline]
    pub fn query(&self, hq: &QueryHierarchy, s: VertexId, t: VertexId) -> Distance {
        let k = hq.common_ancestor_count(s, t);
        let (ls, lt) = (&self.row(s)[..k], &self.row(t)[..k]);
        ls.iter()
            .zip(lt)
            .map(|(&a, &b)| sat_add(a, b))
            .min()
            .unwrap_or(INFINITY)
    }

    pub fn stats(&self) -> LabelStats {
        let max_len = self
            .offsets
            .windows(2)
            .map(|w| (w[1] - w[0]) as usize)
            .max()
            .unwrap_or(0);
        LabelStats {
            entries: self.entries.len() as u64,
            bytes: (self.entries.len() * std::mem::size_of::<Distance>()
                + self.offsets.len() * std::mem::size_of::<u64>()) as u64,
            max_len,
        }
    }
}
