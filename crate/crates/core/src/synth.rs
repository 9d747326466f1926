//! Synthetic road networks.
//!
//! [`city_network`] lays out a lattice of small street grids ("blocks")
//! joined recursively in 2x2 groups. Blocks inside a group are linked by a
//! handful of connector roads, and the number of connectors grows slowly
//! with the group level, so the network has the small balanced separators
//! typical of real road maps. [`random_graph`] produces small connected
//! graphs of assorted shapes for tests.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Coordinates, Distance, Graph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CityConfig {
    /// Number of 2x2 grouping levels; the lattice is `2^levels` blocks wide
    /// and high.
    pub levels: u32,
    pub block_cols: u32,
    pub block_rows: u32,
    /// Probability of keeping a street that is not needed for connectivity.
    pub street_density: f64,
    /// Lattice spacing in coordinate units.
    pub spacing: i32,
    pub seed: u64,
}

impl CityConfig {
    /// 294,912 vertices and roughly 400k edges, a little above the New York
    /// DIMACS graph.
    pub fn ny_scale(seed: u64) -> Self {
        Self {
            levels: 6,
            block_cols: 8,
            block_rows: 9,
            street_density: 0.45,
            spacing: 200,
            seed,
        }
    }

    pub fn small(levels: u32, seed: u64) -> Self {
        Self {
            levels,
            block_cols: 4,
            block_rows: 4,
            street_density: 0.5,
            spacing: 200,
            seed,
        }
    }

    pub fn width(&self) -> u32 {
        self.block_cols << self.levels
    }

    pub fn height(&self) -> u32 {
        self.block_rows << self.levels
    }

    pub fn num_vertices(&self) -> usize {
        self.width() as usize * self.height() as usize
    }
}

/// Generates a connected city network with coordinates. Deterministic in
/// the config.
pub fn city_network(cfg: &CityConfig) -> Graph {
    assert!(
        cfg.block_cols >= 2 && cfg.block_rows >= 2,
        "blocks need at least 2x2 intersections"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (w, h) = (cfg.width(), cfg.height());
    let id = |c: u32, r: u32| -> VertexId { r * w + c };

    let jitter = cfg.spacing / 3;
    let points: Vec<(i32, i32)> = (0..h)
        .flat_map(|r| (0..w).map(move |c| (c, r)))
        .map(|(c, r)| {
            (
                c as i32 * cfg.spacing + rng.gen_range(-jitter..=jitter),
                r as i32 * cfg.spacing + rng.gen_range(-jitter..=jitter),
            )
        })
        .collect();

    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    // Streets inside blocks: every east-west street, the westmost north-south
    // street, and a random share of the remaining north-south streets.
    for r in 0..h {
        for c in 0..w {
            if (c + 1) % cfg.block_cols != 0 {
                edges.push((id(c, r), id(c + 1, r)));
            }
            if (r + 1) % cfg.block_rows != 0 {
                let keep = c % cfg.block_cols == 0 || rng.gen_bool(cfg.street_density);
                if keep {
                    edges.push((id(c, r), id(c, r + 1)));
                }
            }
        }
    }
    // Connectors across block seams. A seam between groups of level `L`
    // (level 1 joins single blocks) gets `L + 1` connectors per group pair.
    let seam_level = |j: u32| 1 + j.trailing_zeros().min(cfg.levels - 1);
    for j in 1..(1u32 << cfg.levels) {
        let level = seam_level(j);
        let links = level as usize + 1;
        let span = cfg.block_rows << (level - 1);
        let x = j * cfg.block_cols;
        for seg in 0..h / span {
            for k in sample(&mut rng, span as usize, links.min(span as usize)).into_iter() {
                let r = seg * span + k as u32;
                edges.push((id(x - 1, r), id(x, r)));
            }
        }
        let span = cfg.block_cols << (level - 1);
        let y = j * cfg.block_rows;
        for seg in 0..w / span {
            for k in sample(&mut rng, span as usize, links.min(span as usize)).into_iter() {
                let c = seg * span + k as u32;
                edges.push((id(c, y - 1), id(c, y)));
            }
        }
    }

    let arcs: Vec<(VertexId, VertexId, Distance)> = edges
        .into_iter()
        .map(|(a, b)| {
            let (pa, pb) = (points[a as usize], points[b as usize]);
            let len = (((pa.0 - pb.0) as f64).powi(2) + ((pa.1 - pb.1) as f64).powi(2)).sqrt();
            let w = (len * rng.gen_range(1.0..1.5)).round().max(1.0) as Distance;
            (a, b, w)
        })
        .collect();
    let mut g = Graph::from_arcs(cfg.num_vertices(), arcs).expect("generated arcs are valid");
    g.set_coordinates(Coordinates::from_points(points))
        .expect("one point per vertex");
    g
}

/// Shapes produced by [`random_graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Random spanning tree plus extra chords; no coordinates.
    TreeChords,
    /// Random points joined to nearby points; with coordinates.
    Geometric,
    /// Grid with missing streets; with coordinates.
    Grid,
}

pub const SHAPES: [Shape; 3] = [Shape::TreeChords, Shape::Geometric, Shape::Grid];

/// A connected graph on `n >= 1` vertices with weights in `[1, max_weight]`.
pub fn random_graph(shape: Shape, n: usize, max_weight: Distance, seed: u64) -> Graph {
    assert!(n >= 1 && max_weight >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weight = |rng: &mut ChaCha8Rng| rng.gen_range(1..=max_weight);
    let mut arcs = Vec::new();
    let mut coords = None;
    match shape {
        Shape::TreeChords => {
            for v in 1..n as VertexId {
                let p = rng.gen_range(0..v);
                arcs.push((p, v, weight(&mut rng)));
            }
            let chords = rng.gen_range(0..=n);
            for _ in 0..chords {
                let (a, b) = (
                    rng.gen_range(0..n as VertexId),
                    rng.gen_range(0..n as VertexId),
                );
                arcs.push((a, b, weight(&mut rng)));
            }
        }
        Shape::Geometric => {
            let side = 1000;
            let pts: Vec<(i32, i32)> = (0..n)
                .map(|_| (rng.gen_range(0..side), rng.gen_range(0..side)))
                .collect();
            let d2 = |a: usize, b: usize| {
                let (dx, dy) = ((pts[a].0 - pts[b].0) as i64, (pts[a].1 - pts[b].1) as i64);
                dx * dx + dy * dy
            };
            // Connect each point to its nearest earlier point, then a few
            // more near neighbours.
            for v in 1..n {
                let p = (0..v).min_by_key(|&u| (d2(u, v), u)).unwrap();
                arcs.push((p as VertexId, v as VertexId, weight(&mut rng)));
                let mut near: Vec<usize> = (0..n).filter(|&u| u != v).collect();
                near.sort_by_key(|&u| (d2(u, v), u));
                let extra = rng.gen_range(0..=2);
                for &u in near.iter().take(extra) {
                    arcs.push((u as VertexId, v as VertexId, weight(&mut rng)));
                }
            }
            coords = Some(Coordinates::from_points(pts));
        }
        Shape::Grid => {
            let cols = (n as f64).sqrt().ceil() as usize;
            let pts: Vec<(i32, i32)> = (0..n)
                .map(|v| ((v % cols) as i32, (v / cols) as i32))
                .collect();
            for v in 0..n {
                let c = v % cols;
                // Row streets and the first column are always kept.
                if c + 1 < cols && v + 1 < n {
                    arcs.push((v as VertexId, (v + 1) as VertexId, weight(&mut rng)));
                }
                if v + cols < n && (c == 0 || rng.gen_bool(0.6)) {
                    arcs.push((v as VertexId, (v + cols) as VertexId, weight(&mut rng)));
                }
            }
            coords = Some(Coordinates::from_points(pts));
        }
    }
    let mut g = Graph::from_arcs(n, arcs).expect("generated arcs are valid");
    if let Some(c) = coords {
        g.set_coordinates(c).expect("one point per vertex");
    }
    g
}

/// Picks a shape and size from a seed, for sweeps over many instances.
pub fn random_instance(
    seed: u64,
    n_range: std::ops::RangeInclusive<usize>,
    max_weight: Distance,
) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let shape = SHAPES[rng.gen_range(0..SHAPES.len())];
    let n = rng.gen_range(n_range);
    random_graph(shape, n, max_weight, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::dijkstra;
    use crate::INFINITY;

    fn connected(g: &Graph) -> bool {
        dijkstra(g, 0).unwrap().iter().all(|&d| d != INFINITY)
    }

    #[test]
    fn city_is_connected_and_deterministic() {
        let cfg = CityConfig::small(3, 7);
        let g = city_network(&cfg);
        assert_eq!(g.num_vertices(), 32 * 32);
        assert!(connected(&g));
        assert!(g.coordinates().unwrap().is_complete());
        assert_eq!(g, city_network(&cfg));
        assert_ne!(g, city_network(&CityConfig { seed: 8, ..cfg }));
    }

    #[test]
    fn ny_scale_size() {
        assert_eq!(CityConfig::ny_scale(1).num_vertices(), 294_912);
    }

    #[test]
    fn random_graphs_are_connected() {
        for seed in 0..60 {
            for shape in SHAPES {
                let n = 1 + (seed as usize * 7) % 90;
                let g = random_graph(shape, n, 100, seed);
                assert_eq!(g.num_vertices(), n);
                assert!(connected(&g), "{shape:?} n={n} seed={seed}");
                assert!(g.edges().all(|(_, _, w)| (1..=100).contains(&w)));
            }
        }
    }
}
