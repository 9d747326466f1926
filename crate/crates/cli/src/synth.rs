use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use dhl_core::dimacs::{write_dimacs_co, write_dimacs_gr};
use dhl_core::synth::{city_network, CityConfig};

use crate::{CmdResult, Failure};

#[derive(clap::Args)]
pub struct Args {
    /// Grouping levels; 6 gives a network of New York size.
    #[arg(long, default_value_t = 6)]
    levels: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_gr: PathBuf,
    #[arg(long)]
    out_co: Option<PathBuf>,
}

pub fn run(a: Args) -> CmdResult {
    if a.levels == 0 || a.levels > 8 {
        return Err(Failure::usage("--levels must lie in 1..=8"));
    }
    let cfg = CityConfig {
        levels: a.levels,
        ..CityConfig::ny_scale(a.seed)
    };
    let g = city_network(&cfg);
    let mut out = BufWriter::new(File::create(&a.out_gr)?);
    write_dimacs_gr(&g, &mut out)?;
    out.flush()?;
    if let Some(co) = &a.out_co {
        let mut out = BufWriter::new(File::create(co)?);
        write_dimacs_co(g.coordinates().expect("city has coordinates"), &mut out)?;
        out.flush()?;
    }
    println!("{} vertices, {} edges", g.num_vertices(), g.num_edges());
    Ok(())
}
