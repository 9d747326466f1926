//! `dhl`: build, query, update and verify distance indexes.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 verification
//! failure.

mod build;
mod query;
mod synth;
mod update;
mod verify;
mod workload;

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use dhl_core::dimacs::{parse_dimacs_co, parse_dimacs_gr};
use dhl_core::{Execution, Graph};

#[derive(Parser)]
#[command(
    name = "dhl",
    version,
    about = "Dynamic exact distance index for road networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index from a DIMACS graph.
    Build(build::Args),
    /// Answer distance queries from a pair file or random pairs.
    Query(query::Args),
    /// Apply an update batch and persist the maintained index.
    Update(update::Args),
    /// Generate benchmark workloads.
    Workload(workload::Args),
    /// Check an index against independent oracles.
    Verify(verify::Args),
    /// Write a generated city network as DIMACS files.
    Synth(synth::Args),
}

/// A failed command together with its exit code.
pub struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: 1,
            error: anyhow::anyhow!(msg.into()),
        }
    }

    pub fn verification(msg: impl Into<String>) -> Self {
        Self {
            code: 3,
            error: anyhow::anyhow!(msg.into()),
        }
    }
}

/// Anything else is a data error.
impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Self {
            code: 2,
            error: e.into(),
        }
    }
}

pub type CmdResult = Result<(), Failure>;

/// Worker count: the flag if given, else `DHL_WORKERS`, else every
/// available core.
pub fn worker_count(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(w) = flag {
        return Ok(w.max(1));
    }
    match std::env::var("DHL_WORKERS") {
        Ok(v) => v.trim().parse::<usize>().map(|w| w.max(1)).map_err(|_| {
            Failure::usage(format!("DHL_WORKERS must be a positive integer, got `{v}`"))
        }),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

pub fn execution(workers: usize) -> Execution {
    if workers <= 1 {
        Execution::Sequential
    } else {
        Execution::parallel(workers)
    }
}

pub fn load_graph(gr: &Path, co: Option<&PathBuf>) -> anyhow::Result<Graph> {
    let f = File::open(gr).with_context(|| format!("opening {}", gr.display()))?;
    let mut g =
        parse_dimacs_gr(BufReader::new(f)).with_context(|| format!("reading {}", gr.display()))?;
    if let Some(co) = co {
        let f = File::open(co).with_context(|| format!("opening {}", co.display()))?;
        let c = parse_dimacs_co(BufReader::new(f), g.num_vertices())
            .with_context(|| format!("reading {}", co.display()))?;
        g.set_coordinates(c)
            .with_context(|| format!("attaching {}", co.display()))?;
    }
    Ok(g)
}

pub fn load_index(path: &Path) -> anyhow::Result<dhl_core::DynamicIndex> {
    dhl_core::index_file::load(path).with_context(|| format!("loading {}", path.display()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Build(a) => build::run(a),
        Command::Query(a) => query::run(a),
        Command::Update(a) => update::run(a),
        Command::Workload(a) => workload::run(a),
        Command::Verify(a) => verify::run(a),
        Command::Synth(a) => synth::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
