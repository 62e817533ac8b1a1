mod common;

use common::*;
use degmatch::decomposition::{NodeKind, SIZE_FACTOR};
use degmatch::graph::named;
use degmatch::{build_nice_decomposition, is_chordal, mcs_order, validate_decomposition, Graph};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn recognition_matches_chordless_cycle_search(g in any_graph(9)) {
        prop_assert_eq!(is_chordal(&g), !has_chordless_cycle(&g));
    }

    #[test]
    fn decompositions_are_valid_and_tight(g in chordal_instance(12)) {
        let peo = mcs_order(&g).unwrap();
        prop_assert!(peo.is_perfect(&g));
        let d = build_nice_decomposition(&g, &peo).unwrap();
        prop_assert_eq!(validate_decomposition(&g, &d), Ok(()));
        prop_assert!(d.len() <= SIZE_FACTOR * g.n() * d.max_bag().max(1) + 1);
        if g.n() <= 10 {
            prop_assert_eq!(d.max_bag(), clique_number(&g));
        }
        let root = d.node(d.root);
        prop_assert!(root.bag.is_empty());
        prop_assert!(matches!(root.kind, NodeKind::Forget(_) | NodeKind::Join | NodeKind::Leaf));
    }

    #[test]
    fn json_round_trip(g in chordal_instance(10)) {
        let d = build_nice_decomposition(&g, &mcs_order(&g).unwrap()).unwrap();
        let back = degmatch::NiceTreeDecomposition::from_json(&d.to_json()).unwrap();
        prop_assert_eq!(back, d);
    }
}

#[test]
fn curated_chordality() {
    let chordal: Vec<Graph> = vec![
        named::path(7),
        named::star(5),
        named::complete(5),
        Graph::from_edges(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]).unwrap(),
    ];
    for g in &chordal {
        assert!(is_chordal(g), "{g:?}");
    }
    let not: Vec<Graph> = (4..=9)
        .map(named::cycle)
        .chain([named::complete_bipartite(2, 3), named::petersen()])
        .collect();
    for g in &not {
        assert!(!is_chordal(g), "{g:?}");
        assert!(mcs_order(g).is_err());
    }
}
