use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use dhl_core::workload::{parse_pairs, random_pairs, PairRecord};
use dhl_core::{Distance, VertexId, INFINITY};

use crate::{execution, load_index, worker_count, CmdResult, Failure};

#[derive(clap::Args)]
pub struct Args {
    #[arg(long)]
    index: PathBuf,
    /// Pair file: `s t [expected_distance]` per line.
    #[arg(long, conflicts_with = "random")]
    pairs: Option<PathBuf>,
    /// Number of uniformly random pairs.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-pair CSV output: `s,t,distance,expected,ns`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// With more than one worker the pairs are answered in parallel and
    /// only the mean latency is reported.
    #[arg(long)]
    workers: Option<usize>,
}

fn show(d: Distance) -> String {
    if d == INFINITY {
        "inf".into()
    } else {
        d.to_string()
    }
}

fn percentile(sorted: &[u64], p: f64) -> u64 {
    let k = ((sorted.len() - 1) as f64 * p).round() as usize;
    sorted[k]
}

pub fn run(a: Args) -> CmdResult {
    let idx = load_index(&a.index)?;
    let g = idx.graph();
    let (pairs, expected): (Vec<(VertexId, VertexId)>, Vec<Option<Distance>>) =
        match (&a.pairs, a.random) {
            (Some(path), None) => {
                let f = File::open(path)?;
                let mut pairs = Vec::new();
                let mut expected = Vec::new();
                let mut bad = 0;
                for rec in parse_pairs(g, BufReader::new(f))? {
                    match rec {
                        PairRecord::Pair { s, t, expected: e } => {
                            pairs.push((s, t));
                            expected.push(e);
                        }
                        PairRecord::Bad { line, message } => {
                            bad += 1;
                            eprintln!("skipping line {line}: {message}");
                        }
                    }
                }
                if bad > 0 {
                    eprintln!("{bad} lines skipped");
                }
                (pairs, expected)
            }
            (None, Some(n)) => {
                let pairs = random_pairs(g.num_vertices(), n, a.seed);
                let expected = vec![None; pairs.len()];
                (pairs, expected)
            }
            _ => return Err(Failure::usage("give exactly one of --pairs and --random")),
        };
    if pairs.is_empty() {
        println!("no pairs");
        return Ok(());
    }

    let workers = worker_count(a.workers)?;
    let (dists, times): (Vec<Distance>, Option<Vec<u64>>) = if workers > 1 {
        let t = Instant::now();
        let d = idx.query_batch(&pairs, execution(workers))?;
        let total = t.elapsed().as_nanos() as f64;
        println!(
            "queries: {} in {:.3}s, mean {:.0} ns",
            pairs.len(),
            total / 1e9,
            total / pairs.len() as f64
        );
        (d, None)
    } else {
        let mut dists = Vec::with_capacity(pairs.len());
        let mut times = Vec::with_capacity(pairs.len());
        for &(s, t) in &pairs {
            let start = Instant::now();
            let d = idx.query_unchecked(s, t);
            times.push(start.elapsed().as_nanos() as u64);
            dists.push(d);
        }
        let mut sorted = times.clone();
        sorted.sort_unstable();
        let mean = sorted.iter().sum::<u64>() as f64 / sorted.len() as f64;
        println!(
            "queries: {}, mean {:.0} ns, p50 {} ns, p99 {} ns, max {} ns",
            pairs.len(),
            mean,
            percentile(&sorted, 0.5),
            percentile(&sorted, 0.99),
            sorted[sorted.len() - 1]
        );
        (dists, Some(times))
    };

    if let Some(path) = &a.out {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "s,t,distance,expected,ns")?;
        for (k, &(s, t)) in pairs.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{}",
                g.external_id(s),
                g.external_id(t),
                show(dists[k]),
                expected[k].map(show).unwrap_or_default(),
                times
                    .as_ref()
                    .map(|ts| ts[k].to_string())
                    .unwrap_or_default()
            )?;
        }
        w.flush()?;
    } else if pairs.len() <= 20 {
        for (k, &(s, t)) in pairs.iter().enumerate() {
            println!(
                "{} {} {}",
                g.external_id(s),
                g.external_id(t),
                show(dists[k])
            );
        }
    }

    let wrong: Vec<usize> = (0..pairs.len())
        .filter(|&k| expected[k].is_some_and(|e| e != dists[k]))
        .collect();
    for &k in wrong.iter().take(10) {
        let (s, t) = pairs[k];
        eprintln!(
            "mismatch: {} {} expected {} got {}",
            g.external_id(s),
            g.external_id(t),
            show(expected[k].unwrap()),
            show(dists[k])
        );
    }
    if !wrong.is_empty() {
        return Err(Failure::verification(format!(
            "{} of {} answers differ from the expected distances",
            wrong.len(),
            pairs.len()
        )));
    }
    Ok(())
}
