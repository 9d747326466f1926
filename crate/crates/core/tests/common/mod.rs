#![allow(dead_code)]

use dhl_core::synth::random_instance;
use dhl_core::{
    BuildConfig, Distance, DynamicIndex, Execution, Graph, PartitionConfig, UpdateBatch, VertexId,
    WeightUpdate, INFINITY,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LEAF_SIZES: [usize; 4] = [1, 2, 4, 16];

/// Config with a leaf size picked from the seed.
pub fn config(seed: u64) -> BuildConfig {
    BuildConfig {
        partition: PartitionConfig {
            leaf_size: LEAF_SIZES[(seed % 4) as usize],
            use_coordinates: !seed.is_multiple_of(5),
            ..Default::default()
        },
        ..Default::default()
    }
}

pub fn instance(seed: u64, max_n: usize, max_weight: Distance) -> (Graph, DynamicIndex) {
    let g = random_instance(seed, 5..=max_n, max_weight);
    let idx = DynamicIndex::build(g.clone(), &config(seed)).unwrap();
    (g, idx)
}

/// A mixed batch over random edges: increases, decreases, deletions
/// (infinite weight) and re-insertions of deleted edges.
pub fn random_batch(graph: &Graph, rng: &mut ChaCha8Rng, max_weight: Distance) -> UpdateBatch {
    let edges: Vec<_> = graph.edges().collect();
    let k = rng.gen_range(1..=edges.len().min(8));
    let updates = (0..k).map(|_| {
        let (u, v, w) = edges[rng.gen_range(0..edges.len())];
        let new = if w == INFINITY {
            rng.gen_range(1..=max_weight)
        } else {
            match rng.gen_range(0..10) {
                0 => INFINITY,
                1..=4 => rng.gen_range(1..=w.max(1)),
                _ => w + rng.gen_range(0..=max_weight),
            }
        };
        WeightUpdate::new(u, v, new)
    });
    UpdateBatch::new(updates.collect::<Vec<_>>())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Edge-list Bellman-Ford, as an oracle for the Dijkstra oracles.
pub fn bellman_ford(graph: &Graph, s: VertexId) -> Vec<Distance> {
    let n = graph.num_vertices();
    let mut dist = vec![INFINITY; n];
    dist[s as usize] = 0;
    let edges: Vec<_> = graph.edges().filter(|e| e.2 != INFINITY).collect();
    for _ in 0..n {
        let mut changed = false;
        for &(a, b, w) in &edges {
            for (x, y) in [(a, b), (b, a)] {
                let dx = dist[x as usize];
                if dx != INFINITY && dx + w < dist[y as usize] {
                    dist[y as usize] = dx + w;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

/// Runs `batches` random batches, checking `check` after each.
pub fn run_batches(
    idx: &mut DynamicIndex,
    seed: u64,
    batches: usize,
    max_weight: Distance,
    execution: Execution,
    mut check: impl FnMut(&DynamicIndex, usize),
) {
    let mut r = rng(seed ^ 0xbadc0de);
    for k in 0..batches {
        let batch = random_batch(idx.graph(), &mut r, max_weight);
        idx.apply_batch(&batch, execution).unwrap();
        check(idx, k);
    }
}
