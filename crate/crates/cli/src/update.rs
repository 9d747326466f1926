use std::fs::{File, OpenOptions};
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::ValueEnum;
use dhl_core::workload::parse_batch;
use dhl_core::{index_file, Execution, MaintenanceReport};

use crate::{load_index, worker_count, CmdResult, Failure};

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Seq,
    Par,
}

#[derive(clap::Args)]
#[command(group = clap::ArgGroup::new("target").required(true).args(["inplace", "out"]))]
pub struct Args {
    #[arg(long)]
    index: PathBuf,
    /// Batch file: `u v new_weight` per line, `inf` deletes the edge.
    #[arg(long)]
    batch: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Seq)]
    mode: Mode,
    /// Workers for `--mode par`.
    #[arg(long)]
    workers: Option<usize>,
    /// Overwrite the input index.
    #[arg(long)]
    inplace: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV file the maintenance report row is appended to.
    #[arg(long)]
    report: Option<PathBuf>,
}

pub fn run(a: Args) -> CmdResult {
    let mut idx = load_index(&a.index)?;
    let batch = parse_batch(idx.graph(), BufReader::new(File::open(&a.batch)?))?;
    let exec = match a.mode {
        Mode::Seq => {
            if a.workers.is_some() {
                return Err(Failure::usage("--workers needs --mode par"));
            }
            Execution::Sequential
        }
        Mode::Par => Execution::parallel(worker_count(a.workers)?),
    };
    let t = Instant::now();
    let report = idx.apply_batch(&batch, exec)?;
    let elapsed = t.elapsed();
    let out = a.out.unwrap_or_else(|| a.index.clone());
    index_file::save(&idx, &out)?;

    println!(
        "{} updates in {:.3}s ({} workers)",
        batch.len(),
        elapsed.as_secs_f64(),
        exec.workers()
    );
    println!("{}", MaintenanceReport::CSV_HEADER);
    println!("{}", report.csv_row());
    if let Some(path) = a.report {
        let fresh = std::fs::metadata(&path).map_or(true, |m| m.len() == 0);
        let mut f = OpenOptions::new().create(true).append(true).open(&path)?;
        if fresh {
            writeln!(f, "{}", MaintenanceReport::CSV_HEADER)?;
        }
        writeln!(f, "{}", report.csv_row())?;
    }
    Ok(())
}
