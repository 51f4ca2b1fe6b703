use degrank::graph::{exact_degree_ranks, load_edge_list, write_edge_list, Graph};
use degrank::params::NetworkParams;
use degrank::rank::{expected_rank_pl_unclamped, Method, RankEstimator};
use degrank::sampling::{sample_mhrw, sample_rw, sample_smoothed, sample_uniform, SampleSet};
use proptest::prelude::*;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 1..4 * n).prop_map(move |edges| Graph::from_edges(n, edges).unwrap())
    })
}

fn pairwise_rank(degrees: &[usize], u: usize) -> usize {
    1 + degrees.iter().filter(|&&d| d > degrees[u]).count()
}

fn non_isolated_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    arb_graph(max_n).prop_filter("needs an edge", |g| g.edge_count() > 0)
}

proptest! {
    #[test]
    fn exact_ranks_match_pairwise_definition(g in arb_graph(80)) {
        let table = exact_degree_ranks(&g);
        let degrees: Vec<usize> = g.degrees().collect();
        for u in 0..g.node_count() {
            prop_assert_eq!(table.rank_of(u), pairwise_rank(&degrees, u));
        }
    }

    #[test]
    fn census_reproduces_exact_ranks(g in arb_graph(60)) {
        let table = exact_degree_ranks(&g);
        let census = SampleSet::census(&g);
        let params = NetworkParams::actual(&g);
        prop_assume!(params.is_ok());
        let params = params.unwrap();
        let est = RankEstimator::new(Method::Us, &params, Some(&census)).unwrap();
        for u in 0..g.node_count() {
            prop_assert_eq!(est.rank(g.degree(u)).unwrap(), table.rank_of(u) as f64);
        }
    }

    #[test]
    fn estimates_are_clamped_and_monotone(g in non_isolated_graph(60), seed in any::<u64>(), n_scale in 0.5f64..3.0) {
        let mut params = NetworkParams::actual(&g).unwrap();
        params.est_size = (g.node_count() as f64 * n_scale).max(1.0);
        let s = 200;
        let samples = [
            (Method::Us, Some(sample_uniform(&g, s, seed).unwrap())),
            (Method::Mh, Some(sample_mhrw(&g, s, seed, None).unwrap())),
            (Method::Rw, Some(sample_rw(&g, s, seed, None).unwrap())),
            (Method::Pd, None),
            (Method::Pl, None),
        ];
        for (method, sample) in &samples {
            let Ok(est) = RankEstimator::new(*method, &params, sample.as_ref()) else {
                prop_assert!(*method == Method::Pl && params.gamma.is_none());
                continue;
            };
            let mut previous = f64::INFINITY;
            for d in 0..=g.max_degree() + 2 {
                let Ok(r) = est.rank(d) else {
                    prop_assert_eq!(*method, Method::Pl);
                    continue;
                };
                prop_assert!(r >= 1.0 && r <= params.est_size, "{method} d={d} r={r}");
                prop_assert!(r <= previous, "{method} not monotone at d={d}");
                previous = r;
            }
        }
    }

    #[test]
    fn pl_full_mass_is_n_plus_one(n in 10.0f64..1e6, gamma in 2.05f64..4.0, d_min in 1usize..20, span in 2usize..5000) {
        let d_max = (d_min + span) as f64;
        let r = expected_rank_pl_unclamped(n, gamma, d_min as f64, d_max, d_min - 1).unwrap();
        prop_assert!(((r - (n + 1.0)) / (n + 1.0)).abs() < 1e-9);
    }

    #[test]
    fn edge_list_roundtrip_is_idempotent(g in non_isolated_graph(80)) {
        let mut first = Vec::new();
        write_edge_list(&g, &mut first).unwrap();
        let loaded = load_edge_list(&first[..]).unwrap();
        let mut second = Vec::new();
        write_edge_list(&loaded, &mut second).unwrap();
        let reloaded = load_edge_list(&second[..]).unwrap();
        let mut third = Vec::new();
        write_edge_list(&reloaded, &mut third).unwrap();
        prop_assert_eq!(&second, &third);
        prop_assert_eq!(loaded.edge_count(), g.edge_count());
        prop_assert_eq!(loaded, reloaded);
    }

    #[test]
    fn sample_csv_roundtrip(g in non_isolated_graph(40), seed in any::<u64>(), c in 0.0f64..50.0) {
        for sample in [
            sample_rw(&g, 150, seed, None).unwrap(),
            sample_smoothed(&g, 150, c, seed, None).unwrap(),
            sample_uniform(&g, 150, seed).unwrap(),
        ] {
            let mut buf = Vec::new();
            sample.write_csv(&mut buf).unwrap();
            let back = SampleSet::read_csv(&buf[..]).unwrap();
            prop_assert_eq!(back, sample);
        }
    }

    #[test]
    fn walks_follow_edges(g in non_isolated_graph(50), seed in any::<u64>()) {
        let walk = sample_rw(&g, 300, seed, None).unwrap();
        for w in walk.trace().windows(2) {
            prop_assert!(g.has_edge(w[0], w[1]));
        }
        let mh = sample_mhrw(&g, 300, seed, None).unwrap();
        for w in mh.trace().windows(2) {
            prop_assert!(w[0] == w[1] || g.has_edge(w[0], w[1]));
        }
    }
}
