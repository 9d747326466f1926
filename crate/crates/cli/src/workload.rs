use std::path::PathBuf;

use dhl_core::workload::{generate, Protocol, WorkloadParams};

use crate::{load_graph, CmdResult, Failure};

#[derive(clap::Args)]
pub struct Args {
    #[arg(long)]
    gr: PathBuf,
    /// x2-restore, multiplier-sweep, distance-bands or scalability.
    #[arg(long)]
    protocol: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    batches: Option<usize>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    pairs_per_band: Option<usize>,
    #[arg(long)]
    l_min: Option<f64>,
}

pub fn run(a: Args) -> CmdResult {
    let protocol = Protocol::parse(&a.protocol).ok_or_else(|| {
        Failure::usage(format!(
            "unknown protocol `{}`; expected x2-restore, multiplier-sweep, distance-bands or scalability",
            a.protocol
        ))
    })?;
    let mut params = WorkloadParams::for_protocol(protocol);
    if let Some(b) = a.batches {
        params.batches = b;
    }
    if let Some(s) = a.batch_size {
        params.batch_size = s;
    }
    if let Some(p) = a.pairs_per_band {
        params.pairs_per_band = p;
    }
    if let Some(l) = a.l_min {
        if l.is_nan() || l <= 0.0 {
            return Err(Failure::usage("--l-min must be positive"));
        }
        params.l_min = l;
    }
    let graph = load_graph(&a.gr, None)?;
    let wl = generate(&graph, protocol, &params, a.seed);
    wl.write_to(&a.out)?;
    for w in &wl.manifest.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(l) = wl.manifest.l_max {
        println!("estimated l_max: {l}");
    }
    println!(
        "wrote {} files to {}",
        wl.manifest.files.len() + 1,
        a.out.display()
    );
    Ok(())
}
