use std::collections::BTreeSet;

use distcolor::graph::{
    block_partition, build_rank_views, generate_rmat, gnp, load_edge_list, load_matrix_market, write_edge_list,
    write_matrix_market, Graph, Partition, RmatParams,
};
use proptest::prelude::*;

fn arb_graph() -> impl Strategy<Value = Graph> {
    (1usize..40)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 0..120)))
        .prop_map(|(n, edges)| Graph::from_edges(n, edges))
}

proptest! {
    #[test]
    fn construction_invariants(g in arb_graph()) {
        prop_assert!(g.check_invariants().is_ok());
        let degree_sum: usize = g.vertices().map(|v| g.degree(v)).sum();
        prop_assert_eq!(degree_sum, 2 * g.num_edges());
        for v in g.vertices() {
            for &w in g.neighbors(v) {
                prop_assert!(g.neighbors(w).binary_search(&v).is_ok());
            }
        }
    }

    #[test]
    fn file_round_trips(g in arb_graph()) {
        let mut mtx = Vec::new();
        write_matrix_market(&g, &mut mtx).unwrap();
        prop_assert_eq!(load_matrix_market(&mtx[..]).unwrap(), g.clone());
        // edge lists lose trailing isolated vertices
        if g.num_edges() > 0 {
            let mut el = Vec::new();
            write_edge_list(&g, &mut el).unwrap();
            let back = load_edge_list(&el[..]).unwrap();
            let a: Vec<_> = g.edges().collect();
            let b: Vec<_> = back.edges().collect();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn views_cover_every_edge(g in arb_graph(), owners in proptest::collection::vec(0usize..4, 40)) {
        let n = g.num_vertices();
        let owner: Vec<usize> = owners[..n].to_vec();
        let part = Partition::new(owner.clone(), 4).unwrap();
        let views = build_rank_views(&g, &part).unwrap();

        let mut seen = BTreeSet::new();
        for view in &views {
            for &v in view.owned() {
                prop_assert!(seen.insert(v), "vertex {} owned twice", v);
                prop_assert_eq!(owner[v], view.rank());
            }
        }
        prop_assert_eq!(seen.len(), n);

        for (u, v) in g.edges() {
            let holding: Vec<usize> = views
                .iter()
                .filter(|view| {
                    let has = |a: usize, b: usize| {
                        view.local_of(a).is_some_and(|l| {
                            view.owned_neighbors(l).iter().any(|&w| view.global(w) == b)
                                || view.ghost_neighbors(l).iter().any(|gn| gn.vertex == b)
                        })
                    };
                    has(u, v) || has(v, u)
                })
                .map(|view| view.rank())
                .collect();
            if owner[u] == owner[v] {
                prop_assert_eq!(holding, vec![owner[u]]);
            } else {
                let mut expected = vec![owner[u], owner[v]];
                expected.sort_unstable();
                prop_assert_eq!(holding, expected);
            }
        }

        for view in &views {
            for l in 0..view.num_owned() {
                prop_assert_eq!(view.is_boundary(l), !view.ghost_neighbors(l).is_empty());
            }
        }
    }
}

#[test]
fn internal_fraction_shrinks_with_more_ranks() {
    let graphs = [
        gnp(256, 0.02, 1),
        generate_rmat(&RmatParams::new(8, 8, RmatParams::GOOD, 2)).unwrap(),
        distcolor::graph::cycle(256),
    ];
    for g in &graphs {
        let mut last = usize::MAX;
        for p in [1, 2, 4, 8, 16] {
            let views = build_rank_views(g, &block_partition(g, p).unwrap()).unwrap();
            let internal: usize = views.iter().map(|v| v.num_internal()).sum();
            assert!(internal <= last, "p={p}: {internal} > {last}");
            last = internal;
        }
    }
}

#[test]
fn block_partition_counts() {
    let g = distcolor::graph::path(10);
    let part = block_partition(&g, 4).unwrap();
    let counts: Vec<usize> = (0..4)
        .map(|r| part.owners().iter().filter(|&&o| o == r).count())
        .collect();
    assert_eq!(counts, vec![3, 3, 2, 2]);
    assert!(block_partition(&g, 0).is_err());
    assert!(block_partition(&g, 11).is_err());
}

#[test]
fn rmat_scale_14_is_reproducible_and_balanced() {
    let params = RmatParams::new(14, 8, RmatParams::ER, 1);
    let a = generate_rmat(&params).unwrap();
    let b = generate_rmat(&params).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.num_vertices(), 1 << 14);
    assert!(a.num_edges() <= 8 << 14);
    let avg = 2.0 * a.num_edges() as f64 / a.num_vertices() as f64;
    let max = a.max_degree() as f64;
    assert!(max >= avg && max <= 4.0 * avg, "max degree {max}, average {avg}");
    assert!(a.check_invariants().is_ok());
}

#[test]
fn rmat_scale_one() {
    for seed in 0..20 {
        let g = generate_rmat(&RmatParams::new(1, 1, RmatParams::ER, seed)).unwrap();
        assert_eq!(g.num_vertices(), 2);
        assert!(g.num_edges() <= 1);
    }
}
