//! Benchmark workloads: update batches and query pair sets.
//!
//! Text formats, one record per line, vertex ids as in the input files:
//! batch files hold `u v new_weight`, pair files hold `s t` optionally
//! followed by the expected distance. Blank lines and lines starting with
//! `#` or `c` are skipped.
//!
//! Everything is a pure function of the graph and the seed.

use std::io::BufRead;
use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Distance, Graph, UpdateBatch, VertexId, WeightUpdate, INFINITY};
use crate::oracle::dijkstra;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    /// Batches whose weights are doubled, each followed by its restore batch.
    X2Restore,
    /// Batch `t` multiplies weights by `t + 1`, then restores them.
    MultiplierSweep,
    /// Query pairs grouped by distance into geometrically growing bands.
    DistanceBands,
    /// Growing prefixes of one update sample, each doubled then restored.
    Scalability,
}

impl Protocol {
    pub fn name(&self) -> &'static str {
        match self {
            Protocol::X2Restore => "x2-restore",
            Protocol::MultiplierSweep => "multiplier-sweep",
            Protocol::DistanceBands => "distance-bands",
            Protocol::Scalability => "scalability",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Protocol::X2Restore,
            Protocol::MultiplierSweep,
            Protocol::DistanceBands,
            Protocol::Scalability,
        ]
        .into_iter()
        .find(|p| p.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorkloadParams {
    /// Batch count for x2-restore and multiplier-sweep.
    pub batches: usize,
    pub batch_size: usize,
    pub l_min: f64,
    pub bands: usize,
    pub pairs_per_band: usize,
    /// Dijkstra runs used to estimate the largest distance. Graphs with at
    /// most this many vertices use every vertex as a source.
    pub l_max_samples: usize,
    /// Upper bound on Dijkstra runs while filling bands.
    pub band_sources: usize,
    /// Scalability sample size and the prefix sizes taken from it.
    pub sample_size: usize,
    pub sizes: Vec<usize>,
}

impl Default for WorkloadParams {
    fn default() -> Self {
        Self {
            batches: 10,
            batch_size: 1000,
            l_min: 1000.0,
            bands: 10,
            pairs_per_band: 10_000,
            l_max_samples: 16,
            band_sources: 2000,
            sample_size: 5000,
            sizes: (1..=10).map(|k| k * 500).collect(),
        }
    }
}

impl WorkloadParams {
    /// Defaults with the multiplier-sweep batch count.
    pub fn for_protocol(protocol: Protocol) -> Self {
        let mut p = Self::default();
        if protocol == Protocol::MultiplierSweep {
            p.batches = 9;
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FileEntry {
    pub name: String,
    /// `batch` or `pairs`.
    pub kind: &'static str,
    pub records: usize,
    /// Weight multiplier of an update batch; 0 marks a restore batch.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<u64>,
    /// Distance range `(lo, hi]` of a band.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub band: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Manifest {
    pub protocol: Protocol,
    pub seed: u64,
    pub vertices: usize,
    pub edges: usize,
    pub params: WorkloadParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l_max: Option<Distance>,
    pub files: Vec<FileEntry>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Workload {
    pub manifest: Manifest,
    /// File contents in manifest order.
    pub contents: Vec<String>,
}

impl Workload {
    /// Writes every file plus `manifest.json` into `dir` (created if needed).
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (entry, text) in self.manifest.files.iter().zip(&self.contents) {
            std::fs::write(dir.join(&entry.name), text)?;
        }
        let json = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        std::fs::write(dir.join("manifest.json"), json + "\n")?;
        Ok(())
    }
}

pub fn generate(graph: &Graph, protocol: Protocol, params: &WorkloadParams, seed: u64) -> Workload {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = Workload {
        manifest: Manifest {
            protocol,
            seed,
            vertices: graph.num_vertices(),
            edges: graph.num_edges(),
            params: params.clone(),
            l_max: None,
            files: Vec::new(),
            warnings: Vec::new(),
        },
        contents: Vec::new(),
    };
    match protocol {
        Protocol::X2Restore | Protocol::MultiplierSweep => {
            for t in 1..=params.batches {
                let edges =
                    sample_edges(graph, params.batch_size, &mut rng, &mut w.manifest.warnings);
                let factor = if protocol == Protocol::X2Restore {
                    2
                } else {
                    t as u64 + 1
                };
                push_pair(&mut w, graph, &format!("batch_{t:02}"), &edges, factor);
            }
        }
        Protocol::Scalability => {
            let edges = sample_edges(
                graph,
                params.sample_size,
                &mut rng,
                &mut w.manifest.warnings,
            );
            for &size in &params.sizes {
                let take = size.min(edges.len());
                if take < size {
                    w.manifest.warnings.push(format!(
                        "size {size} truncated to the {take} sampled updates"
                    ));
                }
                push_pair(&mut w, graph, &format!("size_{size:05}"), &edges[..take], 2);
            }
        }
        Protocol::DistanceBands => distance_bands(graph, params, &mut rng, &mut w),
    }
    w
}

/// Distinct finite-weight edges, in sampling order.
fn sample_edges(
    graph: &Graph,
    count: usize,
    rng: &mut ChaCha8Rng,
    warnings: &mut Vec<String>,
) -> Vec<(VertexId, VertexId, Distance)> {
    let finite: Vec<_> = graph.edges().filter(|&(_, _, w)| w != INFINITY).collect();
    if count > finite.len() {
        warnings.push(format!(
            "requested {count} updates but the graph has {} finite edges",
            finite.len()
        ));
    }
    let take = count.min(finite.len());
    sample(rng, finite.len(), take)
        .into_iter()
        .map(|k| finite[k])
        .collect()
}

fn push_pair(
    w: &mut Workload,
    graph: &Graph,
    stem: &str,
    edges: &[(VertexId, VertexId, Distance)],
    factor: u64,
) {
    let up: Vec<_> = edges
        .iter()
        .map(|&(a, b, x)| WeightUpdate::new(a, b, x * factor))
        .collect();
    let restore: Vec<_> = edges
        .iter()
        .map(|&(a, b, x)| WeightUpdate::new(a, b, x))
        .collect();
    for (name, updates, multiplier) in [
        (format!("{stem}_x{factor}.txt"), up, factor),
        (format!("{stem}_restore.txt"), restore, 0),
    ] {
        w.manifest.files.push(FileEntry {
            name,
            kind: "batch",
            records: updates.len(),
            multiplier: Some(multiplier),
            band: None,
        });
        w.contents.push(format_batch(graph, &updates));
    }
}

/// `(lo, hi]` for bands `1..=bands`: `lo = l_min·x^(i-1)`, `hi = l_min·x^i`
/// with `x = (l_max / l_min)^(1 / bands)`.
pub fn band_bounds(l_min: f64, l_max: f64, bands: usize) -> Vec<(f64, f64)> {
    let x = (l_max / l_min).powf(1.0 / bands as f64);
    (1..=bands as i32)
        .map(|i| (l_min * x.powi(i - 1), l_min * x.powi(i)))
        .collect()
}

fn distance_bands(graph: &Graph, params: &WorkloadParams, rng: &mut ChaCha8Rng, w: &mut Workload) {
    let n = graph.num_vertices();
    let mut l_max: Distance = 0;
    // Small graphs get every source, which makes the estimate exact.
    let sources: Vec<VertexId> = if n <= params.l_max_samples {
        (0..n as VertexId).collect()
    } else {
        (0..params.l_max_samples.max(1))
            .map(|_| rng.gen_range(0..n as VertexId))
            .collect()
    };
    for s in sources {
        let dist = dijkstra(graph, s).expect("sampled vertex is in range");
        l_max = l_max.max(
            dist.iter()
                .copied()
                .filter(|&d| d != INFINITY)
                .max()
                .unwrap_or(0),
        );
    }
    w.manifest.l_max = Some(l_max);
    let bounds = if (l_max as f64) > params.l_min {
        band_bounds(params.l_min, l_max as f64, params.bands)
    } else {
        w.manifest.warnings.push(format!(
            "estimated maximum distance {l_max} does not exceed l_min {}; all bands are empty",
            params.l_min
        ));
        Vec::new()
    };

    let mut pairs: Vec<Vec<(VertexId, VertexId, Distance)>> = vec![Vec::new(); bounds.len()];
    // Several targets per source and band keep the Dijkstra count down on
    // large graphs while still spreading pairs over many sources.
    let per_source = params.pairs_per_band.div_ceil(64).max(1);
    let mut sources = 0;
    while !bounds.is_empty()
        && sources < params.band_sources
        && pairs.iter().any(|p| p.len() < params.pairs_per_band)
    {
        sources += 1;
        let s = rng.gen_range(0..n as VertexId);
        let dist = dijkstra(graph, s).expect("sampled vertex is in range");
        let mut bucket: Vec<Vec<VertexId>> = vec![Vec::new(); bounds.len()];
        for (t, &d) in dist.iter().enumerate() {
            if d == INFINITY {
                continue;
            }
            if let Some(b) = bounds
                .iter()
                .position(|&(lo, hi)| d as f64 > lo && d as f64 <= hi)
            {
                bucket[b].push(t as VertexId);
            }
        }
        for (b, cands) in bucket.into_iter().enumerate() {
            let want = params.pairs_per_band - pairs[b].len();
            let take = want.min(per_source).min(cands.len());
            for k in sample(rng, cands.len(), take).into_iter() {
                let t = cands[k];
                pairs[b].push((s, t, dist[t as usize]));
            }
        }
    }
    for (b, (band, &(lo, hi))) in pairs.iter().zip(&bounds).enumerate() {
        if band.len() < params.pairs_per_band {
            w.manifest.warnings.push(format!(
                "band {} ({lo:.1}, {hi:.1}] has {} of {} pairs",
                b + 1,
                band.len(),
                params.pairs_per_band
            ));
        }
        w.manifest.files.push(FileEntry {
            name: format!("band_{:02}.txt", b + 1),
            kind: "pairs",
            records: band.len(),
            multiplier: None,
            band: Some((lo, hi)),
        });
        w.contents.push(format_pairs(graph, band));
    }
}

pub fn format_batch(graph: &Graph, updates: &[WeightUpdate]) -> String {
    let mut out = String::new();
    for u in updates {
        out.push_str(&format!(
            "{} {} {}\n",
            graph.external_id(u.u),
            graph.external_id(u.v),
            u.new_weight
        ));
    }
    out
}

pub fn format_pairs(graph: &Graph, pairs: &[(VertexId, VertexId, Distance)]) -> String {
    let mut out = String::new();
    for &(s, t, d) in pairs {
        out.push_str(&format!(
            "{} {} {}\n",
            graph.external_id(s),
            graph.external_id(t),
            d
        ));
    }
    out
}

fn records<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, Vec<String>)>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(k, line)| match line {
            Err(e) => Some(Err(Error::Io(e))),
            Ok(line) => {
                let toks: Vec<String> = line.split_ascii_whitespace().map(str::to_owned).collect();
                match toks.first().map(String::as_str) {
                    None | Some("#") | Some("c") => None,
                    Some(t) if t.starts_with('#') => None,
                    _ => Some(Ok((k + 1, toks))),
                }
            }
        })
}

fn vertex(graph: &Graph, tok: &str, line: usize) -> Result<VertexId> {
    let ext: u64 = tok.parse().map_err(|_| Error::Parse {
        line,
        message: format!("`{tok}` is not a vertex id"),
    })?;
    graph.internal_id(ext).ok_or(Error::VertexOutOfRange {
        id: ext,
        n: graph.num_vertices(),
    })
}

/// Reads `u v new_weight` lines. `inf` is accepted as a weight and removes
/// the edge from every path.
pub fn parse_batch<R: BufRead>(graph: &Graph, reader: R) -> Result<UpdateBatch> {
    let mut updates = Vec::new();
    for rec in records(reader) {
        let (line, toks) = rec?;
        if toks.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected `u v new_weight`, found {} fields", toks.len()),
            });
        }
        let (u, v) = (
            vertex(graph, &toks[0], line)?,
            vertex(graph, &toks[1], line)?,
        );
        let w = if toks[2].eq_ignore_ascii_case("inf") {
            INFINITY
        } else {
            toks[2].parse().map_err(|_| Error::Parse {
                line,
                message: format!("`{}` is not a weight", toks[2]),
            })?
        };
        updates.push(WeightUpdate::new(u, v, w));
    }
    Ok(UpdateBatch::new(updates))
}

/// One parsed line of a pair file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairRecord {
    Pair {
        s: VertexId,
        t: VertexId,
        expected: Option<Distance>,
    },
    /// A line that could not be used; the run continues without it.
    Bad { line: usize, message: String },
}

pub fn parse_pairs<R: BufRead>(graph: &Graph, reader: R) -> Result<Vec<PairRecord>> {
    let mut out = Vec::new();
    for rec in records(reader) {
        let (line, toks) = rec?;
        let parsed = (|| -> Result<PairRecord> {
            if !(2..=3).contains(&toks.len()) {
                return Err(Error::Parse {
                    line,
                    message: format!("expected `s t [distance]`, found {} fields", toks.len()),
                });
            }
            let (s, t) = (
                vertex(graph, &toks[0], line)?,
                vertex(graph, &toks[1], line)?,
            );
            let expected = match toks.get(2) {
                None => None,
                Some(d) => Some(d.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("`{d}` is not a distance"),
                })?),
            };
            Ok(PairRecord::Pair { s, t, expected })
        })();
        out.push(parsed.unwrap_or_else(|e| PairRecord::Bad {
            line,
            message: e.to_string(),
        }));
    }
    Ok(out)
}

/// `count` uniformly random pairs.
pub fn random_pairs(n: usize, count: usize, seed: u64) -> Vec<(VertexId, VertexId)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (
                rng.gen_range(0..n as VertexId),
                rng.gen_range(0..n as VertexId),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::sample_network;

    fn small() -> WorkloadParams {
        WorkloadParams {
            batches: 3,
            batch_size: 4,
            l_min: 2.0,
            bands: 3,
            pairs_per_band: 5,
            sample_size: 6,
            sizes: vec![2, 4, 8],
            ..Default::default()
        }
    }

    #[test]
    fn protocol_names_round_trip() {
        for p in [
            "x2-restore",
            "multiplier-sweep",
            "distance-bands",
            "scalability",
        ] {
            assert_eq!(Protocol::parse(p).unwrap().name(), p);
        }
        assert!(Protocol::parse("other").is_none());
    }

    #[test]
    fn x2_restore_batches_are_inverse() {
        let g = sample_network();
        let w = generate(&g, Protocol::X2Restore, &small(), 3);
        assert_eq!(w.manifest.files.len(), 6);
        for pair in w.contents.chunks(2) {
            let up = parse_batch(&g, pair[0].as_bytes()).unwrap();
            let back = parse_batch(&g, pair[1].as_bytes()).unwrap();
            assert_eq!(up.len(), 4);
            for (a, b) in up.updates().iter().zip(back.updates()) {
                assert_eq!((a.u, a.v), (b.u, b.v));
                assert_eq!(a.new_weight, 2 * b.new_weight);
                assert_eq!(g.edge_weight(b.u, b.v), Some(b.new_weight));
            }
        }
    }

    #[test]
    fn sweep_uses_growing_multipliers() {
        let g = sample_network();
        let w = generate(&g, Protocol::MultiplierSweep, &small(), 3);
        let mult: Vec<_> = w
            .manifest
            .files
            .iter()
            .map(|f| f.multiplier.unwrap())
            .collect();
        assert_eq!(mult, vec![2, 0, 3, 0, 4, 0]);
    }

    #[test]
    fn same_seed_same_bytes() {
        let g = sample_network();
        for p in [
            Protocol::X2Restore,
            Protocol::DistanceBands,
            Protocol::Scalability,
        ] {
            assert_eq!(generate(&g, p, &small(), 11), generate(&g, p, &small(), 11));
        }
    }

    #[test]
    fn scalability_truncates_with_warning() {
        let g = sample_network();
        let w = generate(&g, Protocol::Scalability, &small(), 1);
        let sizes: Vec<_> = w.manifest.files.iter().map(|f| f.records).collect();
        assert_eq!(sizes, vec![2, 2, 4, 4, 6, 6]);
        assert_eq!(w.manifest.warnings.len(), 1);
    }

    #[test]
    fn band_bounds_chain() {
        let b = band_bounds(1000.0, 8000.0, 3);
        assert_eq!(b.len(), 3);
        assert_eq!(b[0].0, 1000.0);
        assert!((b[0].1 - 2000.0).abs() < 1e-9);
        assert_eq!(b[1].0, b[0].1);
        assert!((b[2].1 - 8000.0).abs() < 1e-6);
    }

    #[test]
    fn bad_pair_lines_are_reported() {
        let g = sample_network();
        let recs = parse_pairs(&g, "1 2\n# note\n3 99\n4 x\n5 6 7\n".as_bytes()).unwrap();
        assert_eq!(recs.len(), 4);
        assert!(matches!(
            recs[0],
            PairRecord::Pair {
                s: 0,
                t: 1,
                expected: None
            }
        ));
        assert!(matches!(recs[1], PairRecord::Bad { line: 3, .. }));
        assert!(matches!(recs[2], PairRecord::Bad { line: 4, .. }));
        assert!(matches!(
            recs[3],
            PairRecord::Pair {
                expected: Some(7),
                ..
            }
        ));
    }

    #[test]
    fn batch_accepts_infinity() {
        let g = sample_network();
        let b = parse_batch(&g, "1 5 inf\n".as_bytes()).unwrap();
        assert_eq!(b.updates()[0].new_weight, INFINITY);
        assert!(parse_batch(&g, "1 5\n".as_bytes()).is_err());
    }
}
