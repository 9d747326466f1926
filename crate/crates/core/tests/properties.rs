mod common;

use common::{bellman_ford, config, instance, random_batch, rng};
use dhl_core::hierarchy_q::QueryHierarchy;
use dhl_core::oracle::{
    bidirectional_dijkstra, dijkstra, dijkstra_pair, enumerate_valley_shortcuts,
    induced_subgraph_distances, Ancestry,
};
use dhl_core::synth::{random_graph, Shape};
use dhl_core::{index_file, DynamicIndex, Execution, Graph, UpdateBatch, VertexId, INFINITY};
use proptest::prelude::*;

fn check_labels_against_oracle(idx: &DynamicIndex) {
    let (g, hq) = (idx.graph(), idx.query_hierarchy());
    for u in 0..g.num_vertices() as VertexId {
        let dist = induced_subgraph_distances(g, hq, u).unwrap();
        let i = hq.tau(u) as usize;
        for x in 0..g.num_vertices() as VertexId {
            if Ancestry::new(hq).precedes(u, x) {
                assert_eq!(
                    idx.label_entry(x, i).unwrap(),
                    dist[x as usize],
                    "L({x})[{i}]"
                );
            }
        }
    }
}

fn shape(k: u8) -> Shape {
    [Shape::TreeChords, Shape::Geometric, Shape::Grid][k as usize % 3]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn queries_are_exact(seed in any::<u64>()) {
        let (g, idx) = instance(seed, 80, 100);
        for s in 0..g.num_vertices() as VertexId {
            let dist = dijkstra(&g, s).unwrap();
            for t in 0..g.num_vertices() as VertexId {
                prop_assert_eq!(idx.query(s, t).unwrap(), dist[t as usize]);
                prop_assert_eq!(idx.query(t, s).unwrap(), dist[t as usize]);
            }
        }
    }

    #[test]
    fn label_entries_are_subgraph_distances(seed in any::<u64>()) {
        let (_, idx) = instance(seed, 40, 100);
        check_labels_against_oracle(&idx);
        for v in 0..idx.num_vertices() as VertexId {
            let tau = idx.query_hierarchy().tau(v) as usize;
            prop_assert_eq!(idx.label_entry(v, tau).unwrap(), 0);
            prop_assert!(idx.label_entry(v, tau + 1).is_err());
        }
    }

    #[test]
    fn dijkstra_variants_agree(k in any::<u8>(), n in 2usize..50, seed in any::<u64>()) {
        let g = random_graph(shape(k), n, 100, seed);
        for s in 0..n as VertexId {
            let bf = bellman_ford(&g, s);
            prop_assert_eq!(&dijkstra(&g, s).unwrap(), &bf);
            for t in 0..n as VertexId {
                prop_assert_eq!(dijkstra_pair(&g, s, t).unwrap(), bf[t as usize]);
                prop_assert_eq!(bidirectional_dijkstra(&g, s, t).unwrap(), bf[t as usize]);
            }
        }
    }

    #[test]
    fn shortcuts_match_valley_enumeration(k in any::<u8>(), n in 2usize..=12, seed in any::<u64>()) {
        let g = random_graph(shape(k), n, 100, seed);
        let idx = DynamicIndex::build(g.clone(), &config(seed)).unwrap();
        let hu = idx.update_hierarchy();
        let mut built: Vec<_> = hu.shortcuts().map(|(a, b, w)| ((a.min(b), a.max(b)), w)).collect();
        built.sort_unstable();
        let brute: Vec<_> = enumerate_valley_shortcuts(&g, idx.query_hierarchy()).unwrap().into_iter().collect();
        prop_assert_eq!(built, brute);
        prop_assert!(hu.check_minimum_weight(&g, idx.query_hierarchy()).is_none());
        prop_assert!(hu.check_triangle_closure().is_none());
    }

    #[test]
    fn hierarchy_is_balanced_separating_and_ordered(seed in any::<u64>()) {
        let (g, idx) = instance(seed, 120, 100);
        let hq = idx.query_hierarchy();
        hq.check_balance().unwrap();
        hq.check_separator(&g).unwrap();
        check_order(hq);
    }

    #[test]
    fn maintenance_equals_rebuild(seed in any::<u64>()) {
        let (_, mut idx) = instance(seed, 40, 100);
        let hash = idx.update_hierarchy().structure_hash();
        let mut r = rng(seed);
        for _ in 0..6 {
            let batch = random_batch(idx.graph(), &mut r, 100);
            idx.apply_batch(&batch, Execution::Sequential).unwrap();
            let (hu, labels) = idx.rebuilt().unwrap();
            prop_assert_eq!(hu.weights(), idx.update_hierarchy().weights());
            prop_assert_eq!(&labels, idx.labels());
            prop_assert_eq!(idx.update_hierarchy().structure_hash(), hash);
        }
    }

    #[test]
    fn parallel_equals_sequential(seed in any::<u64>(), workers in 1usize..9) {
        let (_, base) = instance(seed, 40, 100);
        let (mut seq, mut par) = (base.clone(), base);
        let mut r = rng(seed);
        for _ in 0..4 {
            let batch = random_batch(seq.graph(), &mut r, 100);
            seq.apply_batch(&batch, Execution::Sequential).unwrap();
            par.apply_batch(&batch, Execution::parallel(workers)).unwrap();
            prop_assert_eq!(seq.labels(), par.labels());
            prop_assert_eq!(seq.update_hierarchy(), par.update_hierarchy());
        }
    }

    #[test]
    fn inverse_batch_restores_index(seed in any::<u64>()) {
        let (_, mut idx) = instance(seed, 60, 100);
        let before = index_file::to_bytes(&idx);
        let mut r = rng(seed);
        let batch = random_batch(idx.graph(), &mut r, 100);
        let classified = idx.graph().classify(&batch).unwrap();
        idx.apply_batch(&batch, Execution::Sequential).unwrap();
        idx.apply_batch(&classified.inverse(), Execution::parallel(2)).unwrap();
        prop_assert!(index_file::to_bytes(&idx) == before);
    }

    #[test]
    fn index_file_round_trips(seed in any::<u64>()) {
        let (_, idx) = instance(seed, 60, 100);
        let bytes = index_file::to_bytes(&idx);
        let back = index_file::from_bytes(&bytes).unwrap();
        prop_assert!(index_file::to_bytes(&back) == bytes);
        prop_assert_eq!(back, idx);
    }

    #[test]
    fn relaxation_fixpoint_holds(seed in any::<u64>()) {
        let (_, idx) = instance(seed, 60, 100);
        let (hq, hu) = (idx.query_hierarchy(), idx.update_hierarchy());
        for v in 0..idx.num_vertices() as VertexId {
            let ups = hu.up_targets(v).iter().zip(hu.up_weights(v));
            for (&w, &weight) in ups {
                for i in 0..=hq.tau(w) as usize {
                    let via = weight.saturating_add(idx.label_entry(w, i).unwrap());
                    prop_assert!(idx.label_entry(v, i).unwrap() <= via);
                }
            }
        }
    }
}

/// Ancestry, ranks and common-ancestor counts against parent-pointer walks.
fn check_order(hq: &QueryHierarchy) {
    let n = hq.num_vertices() as VertexId;
    let anc = Ancestry::new(hq);
    let sets: Vec<Vec<VertexId>> = (0..n).map(|v| anc.ancestors(v)).collect();
    for v in 0..n {
        assert_eq!(sets[v as usize].len(), hq.tau(v) as usize + 1);
        let mut by_rank: Vec<u32> = sets[v as usize].iter().map(|&a| hq.tau(a)).collect();
        by_rank.sort_unstable();
        assert_eq!(by_rank, (0..=hq.tau(v)).collect::<Vec<_>>());
        for i in 0..=hq.tau(v) {
            let a = hq.ancestor_at(v, i);
            assert!(anc.precedes(a, v));
            assert_eq!(hq.tau(a), i);
        }
    }
    for s in 0..n {
        for t in 0..n {
            assert_eq!(hq.is_ancestor(s, t), anc.precedes(s, t));
            let common = sets[s as usize]
                .iter()
                .filter(|a| sets[t as usize].contains(a))
                .count();
            assert_eq!(hq.common_ancestor_count(s, t), common, "{s} {t}");
        }
    }
}

#[test]
fn disconnected_graph_answers_infinity() {
    let g = Graph::from_arcs(6, [(0, 1, 3), (1, 2, 4), (3, 4, 1), (4, 5, 1)]).unwrap();
    let idx = DynamicIndex::build(g, &config(1)).unwrap();
    assert_eq!(idx.query(0, 2).unwrap(), 7);
    assert_eq!(idx.query(0, 5).unwrap(), INFINITY);
    assert_eq!(idx.query(4, 3).unwrap(), 1);
}

#[test]
fn deleting_and_restoring_an_edge() {
    let g = Graph::from_arcs(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 10)]).unwrap();
    let mut idx = DynamicIndex::build(g, &config(1)).unwrap();
    let del = UpdateBatch::new([dhl_core::WeightUpdate::new(1, 2, INFINITY)]);
    idx.apply_batch(&del, Execution::Sequential).unwrap();
    assert_eq!(idx.query(0, 2).unwrap(), 11);
    let cut = UpdateBatch::new([dhl_core::WeightUpdate::new(0, 3, INFINITY)]);
    idx.apply_batch(&cut, Execution::Sequential).unwrap();
    assert_eq!(idx.query(0, 2).unwrap(), INFINITY);
    let back = UpdateBatch::new([
        dhl_core::WeightUpdate::new(0, 3, 10),
        dhl_core::WeightUpdate::new(1, 2, 1),
    ]);
    idx.apply_batch(&back, Execution::Sequential).unwrap();
    assert_eq!(idx.query(0, 2).unwrap(), 2);
    let (hu, labels) = idx.rebuilt().unwrap();
    assert_eq!(&hu, idx.update_hierarchy());
    assert_eq!(&labels, idx.labels());
}
