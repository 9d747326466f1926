use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::ValueEnum;
use dhl_core::oracle::{
    bidirectional_dijkstra, dijkstra, enumerate_valley_shortcuts, induced_subgraph_distances,
};
use dhl_core::{index_file, DynamicIndex, Error, VertexId};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{CmdResult, Failure};

/// `full` runs all-pairs Dijkstra, so it is limited to small graphs.
const FULL_LIMIT: usize = 5000;
/// Mismatches printed before the rest are only counted.
const SHOWN: usize = 10;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Level {
    Query,
    Labels,
    Shortcuts,
    Full,
}

#[derive(clap::Args)]
pub struct Args {
    #[arg(long)]
    index: PathBuf,
    /// Checks per sampled level; a value at least the population size
    /// checks everything.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Level::Query)]
    level: Level,
}

#[derive(Default)]
struct Tally {
    checked: u64,
    failed: u64,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failed as usize <= SHOWN {
                eprintln!("mismatch: {}", describe());
            }
        }
    }
}

fn check_queries(
    idx: &DynamicIndex,
    pairs: impl Iterator<Item = (VertexId, VertexId)>,
    t: &mut Tally,
) {
    let g = idx.graph();
    for (s, u) in pairs {
        let got = idx.query_unchecked(s, u);
        let want = bidirectional_dijkstra(g, s, u).expect("ids in range");
        t.check(got == want, || {
            format!(
                "query {} {}: index {got}, Dijkstra {want} (dhl query --pairs with `{} {}`)",
                g.external_id(s),
                g.external_id(u),
                g.external_id(s),
                g.external_id(u)
            )
        });
    }
}

/// Label entries `(v, i)`, grouped by ancestor so each restricted Dijkstra
/// runs once.
fn check_labels(idx: &DynamicIndex, entries: Vec<(VertexId, u32)>, t: &mut Tally) {
    let (g, hq) = (idx.graph(), idx.query_hierarchy());
    let mut by_root: BTreeMap<VertexId, Vec<(VertexId, u32)>> = BTreeMap::new();
    for (v, i) in entries {
        by_root
            .entry(hq.ancestor_at(v, i))
            .or_default()
            .push((v, i));
    }
    for (root, group) in by_root {
        let dist = induced_subgraph_distances(g, hq, root).expect("root precedes its descendants");
        for (v, i) in group {
            let got = idx.labels().row(v)[i as usize];
            let want = dist[v as usize];
            t.check(got == want, || {
                format!(
                    "label of {} at rank {i} (ancestor {}): stored {got}, subgraph distance {want}",
                    g.external_id(v),
                    g.external_id(root)
                )
            });
        }
    }
}

fn check_shortcuts(idx: &DynamicIndex, ids: impl Iterator<Item = u32>, t: &mut Tally) {
    let (g, hq, hu) = (idx.graph(), idx.query_hierarchy(), idx.update_hierarchy());
    for id in ids {
        let (got, want) = (hu.weight(id), hu.recompute(g, hq, id));
        t.check(got == want, || {
            let (a, b) = hu.endpoints(id);
            format!(
                "shortcut {} {}: stored {got}, minimum over edge and two-hop routes {want}",
                g.external_id(a),
                g.external_id(b)
            )
        });
    }
}

fn all_entries(idx: &DynamicIndex) -> Vec<(VertexId, u32)> {
    let hq = idx.query_hierarchy();
    (0..idx.num_vertices() as VertexId)
        .flat_map(|v| (0..=hq.tau(v)).map(move |i| (v, i)))
        .collect()
}

fn full(idx: &DynamicIndex, t: &mut Tally) -> Result<(), Failure> {
    let (g, hq, hu) = (idx.graph(), idx.query_hierarchy(), idx.update_hierarchy());
    let n = g.num_vertices();
    if n > FULL_LIMIT {
        return Err(Failure::usage(format!(
            "--level full scans all pairs and is limited to {FULL_LIMIT} vertices (index has {n})"
        )));
    }
    for s in 0..n as VertexId {
        let dist = dijkstra(g, s).expect("ids in range");
        for u in 0..n as VertexId {
            let got = idx.query_unchecked(s, u);
            t.check(got == dist[u as usize], || {
                format!(
                    "query {} {}: index {got}, Dijkstra {}",
                    g.external_id(s),
                    g.external_id(u),
                    dist[u as usize]
                )
            });
        }
    }
    check_labels(idx, all_entries(idx), t);
    check_shortcuts(idx, 0..hu.num_shortcuts() as u32, t);
    let structural = [
        hq.check_balance().err().map(|e| e.to_string()),
        hq.check_separator(g).err().map(|e| e.to_string()),
        hu.check_triangle_closure().map(|(a, b)| {
            format!(
                "missing shortcut between {} and {}",
                g.external_id(a),
                g.external_id(b)
            )
        }),
    ];
    for problem in structural {
        t.check(problem.is_none(), || problem.unwrap());
    }
    match enumerate_valley_shortcuts(g, hq) {
        Ok(brute) => {
            let mut built: Vec<_> = hu
                .shortcuts()
                .map(|(a, b, w)| ((a.min(b), a.max(b)), w))
                .collect();
            built.sort_unstable();
            let same = built == brute.into_iter().collect::<Vec<_>>();
            t.check(same, || {
                "shortcut set differs from valley-path enumeration".into()
            });
        }
        Err(Error::TooLarge { .. }) => {
            println!("valley-path enumeration skipped (graph too large)")
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

pub fn run(a: Args) -> CmdResult {
    let idx = match index_file::load(&a.index) {
        Ok(idx) => idx,
        Err(e @ (Error::Checksum(_) | Error::Format(_) | Error::Version { .. })) => {
            return Err(Failure::verification(format!("{}: {e}", a.index.display())));
        }
        Err(e) => return Err(e.into()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let n = idx.num_vertices();
    let mut t = Tally::default();
    match a.level {
        Level::Query => {
            let pairs: Vec<_> = (0..a.samples)
                .map(|_| {
                    (
                        rng.gen_range(0..n as VertexId),
                        rng.gen_range(0..n as VertexId),
                    )
                })
                .collect();
            check_queries(&idx, pairs.into_iter(), &mut t);
        }
        Level::Labels => {
            let entries = all_entries(&idx);
            let picked = if a.samples >= entries.len() {
                entries
            } else {
                sample(&mut rng, entries.len(), a.samples)
                    .into_iter()
                    .map(|k| entries[k])
                    .collect()
            };
            check_labels(&idx, picked, &mut t);
        }
        Level::Shortcuts => {
            let m = idx.update_hierarchy().num_shortcuts();
            let ids: Vec<u32> = if a.samples >= m {
                (0..m as u32).collect()
            } else {
                sample(&mut rng, m, a.samples)
                    .into_iter()
                    .map(|k| k as u32)
                    .collect()
            };
            check_shortcuts(&idx, ids.into_iter(), &mut t);
        }
        Level::Full => full(&idx, &mut t)?,
    }
    if t.failed > 0 {
        return Err(Failure::verification(format!(
            "{} of {} checks failed",
            t.failed, t.checked
        )));
    }
    println!("ok: {} checks passed", t.checked);
    Ok(())
}
