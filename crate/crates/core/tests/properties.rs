use graph_invariants::features::{build_x_init, feature_agg};
use graph_invariants::invariants::{basic, indices};
use graph_invariants::io::{parse_jsonl_dataset, write_jsonl_dataset};
use graph_invariants::registry::{build_catalog, Regime, RegimeConfig, Subset};
use graph_invariants::{Graph, GraphContext, GraphDataset};
use proptest::prelude::*;

fn graph() -> impl Strategy<Value = Graph> {
    (1usize..14).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let m = pairs.len();
        proptest::collection::vec(any::<bool>(), m)
            .prop_map(move |keep| Graph::new(n, pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e)).unwrap())
    })
}

fn graph_and_perm() -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph().prop_flat_map(|g| {
        let n = g.num_vertices();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduced_fingerprint_is_relabel_invariant((g, perm) in graph_and_perm()) {
        let c = build_catalog(&RegimeConfig::new(Regime::Reduced, Subset::I)).unwrap();
        let (a, b) = (c.fingerprint(&g), c.fingerprint(&g.relabel(&perm)));
        for (x, y) in a.blocks.iter().zip(&b.blocks) {
            if x.name == "kolmogorov_complexity" {
                continue;
            }
            prop_assert_eq!(&x.status, &y.status);
            for (u, v) in x.values.iter().zip(&y.values) {
                prop_assert!(u.is_nan() && v.is_nan() || (u - v).abs() <= 1e-9 * u.abs().max(v.abs()).max(1.0),
                    "{}: {} vs {}", x.name, u, v);
            }
        }
    }

    #[test]
    fn fingerprint_width_is_fixed(g in graph()) {
        let c = build_catalog(&RegimeConfig::new(Regime::Full, Subset::I)).unwrap();
        prop_assert_eq!(c.fingerprint(&g).values().count(), c.width());
    }

    #[test]
    fn degree_sums(g in graph()) {
        let ctx = GraphContext::new(&g);
        let m = g.num_edges() as f64;
        let first = indices::zagreb_first(&ctx);
        // Cauchy–Schwarz on the degree sequence.
        prop_assert!(first * g.num_vertices() as f64 >= 4.0 * m * m - 1e-9);
        prop_assert!(indices::wiener(&ctx) >= m);
        prop_assert!(basic::density(&ctx) <= 1.0);
    }

    #[test]
    fn agg_counts_walks(g in graph()) {
        let agg = feature_agg(&g, &build_x_init(&g).unwrap(), 2);
        let zagreb = indices::zagreb_first(&GraphContext::new(&g));
        prop_assert_eq!(agg[2], zagreb);
    }

    #[test]
    fn jsonl_round_trip(g in graph()) {
        let ds = GraphDataset::new("d", vec![g.clone()]).unwrap();
        let mut buf = Vec::new();
        write_jsonl_dataset(&ds, &mut buf).unwrap();
        let back = parse_jsonl_dataset(buf.as_slice()).unwrap();
        prop_assert_eq!(back.graphs()[0].edges(), g.edges());
        prop_assert_eq!(back.graphs()[0].num_vertices(), g.num_vertices());
    }
}
