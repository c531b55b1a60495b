use distcolor::dist::{run_protocol, Backend, Mode, ProtocolConfig};
use distcolor::graph::{block_partition, complete, complete_bipartite, gnp, path, petersen, Graph};
use distcolor::seq::{
    check_validity, chromatic_oracle, greedy_color, order_vertices, Coloring, OrderingKind, SelectionKind,
};
use distcolor::Color;
use proptest::prelude::*;

/// Smallest k admitting a proper coloring, by trying all k^n assignments.
fn brute_force_chromatic(g: &Graph) -> u32 {
    let n = g.num_vertices();
    if n == 0 {
        return 0;
    }
    for k in 1..=n as u32 {
        let mut colors = vec![0u32; n];
        loop {
            if g.edges().all(|(u, v)| colors[u] != colors[v]) {
                return k;
            }
            let mut i = 0;
            while i < n {
                colors[i] += 1;
                if colors[i] < k {
                    break;
                }
                colors[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
    n as u32
}

/// Plain First Fit along `order`.
fn reference_first_fit(g: &Graph, order: &[usize]) -> Vec<Color> {
    let mut colors = vec![0; g.num_vertices()];
    for &v in order {
        let mut c = 1;
        while g.neighbors(v).iter().any(|&w| colors[w] == c) {
            c += 1;
        }
        colors[v] = c;
    }
    colors
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..max_n)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 0..(3 * n))))
        .prop_map(|(n, edges)| Graph::from_edges(n, edges))
}

fn arb_selection() -> impl Strategy<Value = SelectionKind> {
    prop_oneof![
        Just(SelectionKind::FirstFit),
        Just(SelectionKind::LeastUsed),
        (1u32..6).prop_map(|e| SelectionKind::StaggeredFirstFit(Some(e))),
        Just(SelectionKind::StaggeredFirstFit(None)),
        (1u32..8).prop_map(SelectionKind::RandomX),
    ]
}

fn arb_ordering() -> impl Strategy<Value = OrderingKind> {
    prop::sample::select(OrderingKind::ALL.to_vec())
}

proptest! {
    #[test]
    fn orderings_are_permutations(g in arb_graph(60), ordering in arb_ordering()) {
        let mut order = order_vertices(&g, ordering);
        order.sort_unstable();
        prop_assert_eq!(order, (0..g.num_vertices()).collect::<Vec<_>>());
    }

    #[test]
    fn greedy_first_fit_matches_reference(g in arb_graph(60), ordering in arb_ordering()) {
        let order = order_vertices(&g, ordering);
        let c = greedy_color(&g, &order, SelectionKind::FirstFit, 0).unwrap();
        prop_assert_eq!(c.as_raw(), &reference_first_fit(&g, &order)[..]);
        prop_assert!(c.num_colors() as usize <= g.max_degree() + 1);
    }

    #[test]
    fn random_one_is_first_fit(g in arb_graph(60), seed in any::<u64>()) {
        let order = order_vertices(&g, OrderingKind::Natural);
        prop_assert_eq!(
            greedy_color(&g, &order, SelectionKind::RandomX(1), seed).unwrap(),
            greedy_color(&g, &order, SelectionKind::FirstFit, 0).unwrap()
        );
    }

    #[test]
    fn oracle_is_exact_on_tiny_graphs(g in arb_graph(8)) {
        let chi = chromatic_oracle(&g).unwrap();
        prop_assert_eq!(chi, brute_force_chromatic(&g));
        for ordering in OrderingKind::ALL {
            let c = greedy_color(&g, &order_vertices(&g, ordering), SelectionKind::FirstFit, 0).unwrap();
            prop_assert!(chi <= c.num_colors());
        }
    }

    #[test]
    fn protocol_colorings_are_valid(
        g in arb_graph(80),
        p in 1usize..6,
        asynchronous in any::<bool>(),
        ordering in arb_ordering(),
        selection in arb_selection(),
        superstep in 1usize..12,
        seed in any::<u64>(),
    ) {
        let p = p.min(g.num_vertices());
        let cfg = ProtocolConfig {
            superstep_size: superstep,
            mode: if asynchronous { Mode::Asynchronous } else { Mode::Synchronous },
            ordering,
            selection,
            seed,
            ..Default::default()
        };
        let (c, m) = run_protocol(&g, &block_partition(&g, p).unwrap(), &cfg).unwrap();
        prop_assert!(check_validity(&g, &c).unwrap().is_empty());
        prop_assert_eq!(m.num_colors, c.num_colors());
        prop_assert!(m.nonempty_messages() <= m.messages());
        prop_assert_eq!(m.conflicts, m.conflicts_per_round.iter().sum::<u64>());
        prop_assert_eq!(*m.conflicts_per_round.last().unwrap(), 0);
    }
}

#[test]
fn small_named_graphs() {
    assert_eq!(chromatic_oracle(&complete(3)).unwrap(), 3);
    assert_eq!(chromatic_oracle(&path(3)).unwrap(), 2);
    assert_eq!(chromatic_oracle(&petersen()).unwrap(), 3);
    assert_eq!(chromatic_oracle(&complete_bipartite(2, 3)).unwrap(), 2);
}

#[test]
fn runs_are_deterministic() {
    let g = gnp(300, 0.03, 8);
    let part = block_partition(&g, 4).unwrap();
    for mode in [Mode::Synchronous, Mode::Asynchronous] {
        let cfg = ProtocolConfig {
            mode,
            superstep_size: 9,
            selection: SelectionKind::RandomX(4),
            seed: 77,
            ..Default::default()
        };
        let (a, ma) = run_protocol(&g, &part, &cfg).unwrap();
        let (b, mb) = run_protocol(&g, &part, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(ma.traffic, mb.traffic);
        assert_eq!(ma.ticks, mb.ticks);
    }
}

#[test]
fn threaded_backend_matches_in_sync_mode() {
    for seed in 0..5 {
        let g = gnp(250, 0.04, seed);
        let part = block_partition(&g, 5).unwrap();
        let cfg = ProtocolConfig {
            superstep_size: 6,
            seed,
            ordering: OrderingKind::SmallestLast,
            ..Default::default()
        };
        let threaded = ProtocolConfig {
            backend: Backend::Threaded,
            ..cfg.clone()
        };
        let (a, ma) = run_protocol(&g, &part, &cfg).unwrap();
        let (b, mb): (Coloring, _) = run_protocol(&g, &part, &threaded).unwrap();
        assert_eq!(a, b);
        assert_eq!(ma.traffic, mb.traffic);
        assert_eq!(ma.rounds, mb.rounds);
    }
}
