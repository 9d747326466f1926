//! Sequential against worker-pool execution on a generated city network.
//! Build with `--no-default-features` to time the same schedules on one
//! thread.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dhl_core::synth::{city_network, CityConfig};
use dhl_core::workload::{self, parse_batch, Protocol, WorkloadParams};
use dhl_core::{BuildConfig, DynamicIndex, Execution, Labelling, UpdateBatch};

const MODES: [(&str, Execution); 3] = [
    ("sequential", Execution::Sequential),
    ("parallel-2", Execution::Parallel { workers: 2 }),
    ("parallel-4", Execution::Parallel { workers: 4 }),
];

fn fixture() -> (DynamicIndex, Vec<(UpdateBatch, UpdateBatch)>) {
    let g = city_network(&CityConfig::small(5, 3));
    let idx = DynamicIndex::build(g, &BuildConfig::default()).unwrap();
    let params = WorkloadParams {
        batches: 4,
        batch_size: 200,
        ..WorkloadParams::default()
    };
    let wl = workload::generate(idx.graph(), Protocol::X2Restore, &params, 1);
    let batches: Vec<UpdateBatch> = wl
        .contents
        .iter()
        .map(|text| parse_batch(idx.graph(), text.as_bytes()).unwrap())
        .collect();
    let pairs = batches
        .chunks(2)
        .map(|p| (p[0].clone(), p[1].clone()))
        .collect();
    (idx, pairs)
}

fn maintenance(c: &mut Criterion) {
    let (idx, batches) = fixture();
    let mut group = c.benchmark_group("x2-restore");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            let mut idx = idx.clone();
            b.iter(|| {
                for (up, back) in &batches {
                    black_box(idx.apply_batch(up, exec).unwrap());
                    black_box(idx.apply_batch(back, exec).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn labelling(c: &mut Criterion) {
    let (idx, _) = fixture();
    let mut group = c.benchmark_group("labelling");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                black_box(Labelling::build(
                    idx.query_hierarchy(),
                    idx.update_hierarchy(),
                    exec,
                ))
            })
        });
    }
    group.finish();
}

fn queries(c: &mut Criterion) {
    let (idx, _) = fixture();
    let pairs = workload::random_pairs(idx.num_vertices(), 10_000, 5);
    let mut group = c.benchmark_group("queries");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(idx.query_batch(&pairs, exec).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, maintenance, labelling, queries);
criterion_main!(benches);
