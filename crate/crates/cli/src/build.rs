use std::path::PathBuf;
use std::time::Instant;

use dhl_core::hierarchy_q::{DEFAULT_BETA, DEFAULT_LEAF_SIZE};
use dhl_core::{index_file, BuildConfig, DynamicIndex, Metadata, PartitionConfig};

use crate::{execution, load_graph, worker_count, CmdResult, Failure};

#[derive(clap::Args)]
pub struct Args {
    /// DIMACS `.gr` file.
    #[arg(long)]
    gr: PathBuf,
    /// DIMACS `.co` file; enables coordinate-based separators.
    #[arg(long)]
    co: Option<PathBuf>,
    /// Balance parameter: each side of a separator holds at most
    /// (1 - beta) of its subgraph.
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
    /// Recorded in the index metadata.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Subgraphs up to this size become a single tree node.
    #[arg(long, default_value_t = DEFAULT_LEAF_SIZE)]
    leaf_size: usize,
    /// Ignore coordinates even when `--co` is given.
    #[arg(long)]
    no_coordinates: bool,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

pub fn run(a: Args) -> CmdResult {
    if !(a.beta > 0.0 && a.beta <= 0.5) {
        return Err(Failure::usage(format!(
            "--beta must lie in (0, 0.5], got {}",
            a.beta
        )));
    }
    if a.leaf_size == 0 {
        return Err(Failure::usage("--leaf-size must be at least 1"));
    }
    let exec = execution(worker_count(a.workers)?);
    let t = Instant::now();
    let graph = load_graph(&a.gr, a.co.as_ref())?;
    let read = t.elapsed();
    let ingest = graph.ingest_report();
    println!(
        "graph: {} vertices, {} edges (read in {:.2}s)",
        graph.num_vertices(),
        graph.num_edges(),
        read.as_secs_f64()
    );
    if ingest.self_loops > 0 || ingest.merge_conflicts > 0 {
        println!(
            "ingest: dropped {} self-loops, {} pairs had conflicting weights (kept the minimum)",
            ingest.self_loops, ingest.merge_conflicts
        );
    }
    let config = BuildConfig {
        partition: PartitionConfig {
            beta: a.beta,
            leaf_size: a.leaf_size,
            use_coordinates: !a.no_coordinates,
            execution: exec,
        },
        execution: exec,
        meta: Metadata {
            seed: a.seed,
            dataset: a.gr.display().to_string(),
        },
    };
    let t = Instant::now();
    let idx = DynamicIndex::build(graph, &config)?;
    let built = t.elapsed();
    index_file::save(&idx, &a.out)?;
    let stats = idx.label_stats();
    let hq = idx.query_hierarchy();
    println!("construction: {:.2}s", built.as_secs_f64());
    println!(
        "tree: {} nodes, height {}, max rank {}",
        hq.nodes().len(),
        hq.height(),
        hq.max_tau()
    );
    println!("shortcuts: {}", idx.update_hierarchy().num_shortcuts());
    println!(
        "labels: {} entries, {:.1} MB, longest {}",
        stats.entries,
        stats.bytes as f64 / 1e6,
        stats.max_len
    );
    let size = std::fs::metadata(&a.out)?.len();
    println!("wrote {} ({:.1} MB)", a.out.display(), size as f64 / 1e6);
    Ok(())
}
