mod common;

use common::*;
use degmatch::degeneracy::{degeneracy, degeneracy_of_set, is_r_degenerate, DegeneracyOutcome};
use degmatch::io::{parse_dimacs, parse_graph6, serialize_dimacs, serialize_graph6};
use degmatch::oracle::brute_is_uniquely_restricted;
use degmatch::{classify_matching, Graph};
use proptest::prelude::*;

/// Minimum degree of `g[set]`.
fn min_inner_degree(g: &Graph, set: &[usize]) -> usize {
    set.iter()
        .map(|&v| g.neighbors(v).iter().filter(|w| set.contains(w)).count())
        .min()
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn degeneracy_is_hereditary(g in any_graph(9), mask in any::<u16>()) {
        let d = degeneracy(&g);
        let subset: Vec<usize> = g.vertices().filter(|v| mask >> v & 1 == 1).collect();
        prop_assert!(degeneracy_of_set(&g, &subset) <= d);
        // the definition: every nonempty subgraph has a vertex of degree at most d
        prop_assert!(subset.is_empty() || min_inner_degree(&g, &subset) <= d);
    }

    #[test]
    fn degeneracy_outcome_is_sound(g in any_graph(9), r in 0usize..5) {
        match is_r_degenerate(&g, r) {
            DegeneracyOutcome::Degenerate(cert) => {
                prop_assert!(cert.verify(&g));
                let pos: Vec<usize> = {
                    let mut p = vec![0; g.n()];
                    for (i, &v) in cert.order.iter().enumerate() { p[v] = i; }
                    p
                };
                for &v in &cert.order {
                    let later = g.neighbors(v).iter().filter(|&&w| pos[w] > pos[v]).count();
                    prop_assert!(later <= r);
                }
            }
            DegeneracyOutcome::Stuck(core) => {
                prop_assert!(!core.is_empty());
                prop_assert!(min_inner_degree(&g, &core) > r);
            }
        }
    }

    #[test]
    fn graph6_and_dimacs_round_trip(g in any_graph(12)) {
        prop_assert_eq!(parse_graph6(&serialize_graph6(&g)).unwrap(), g.clone());
        prop_assert_eq!(parse_dimacs(&serialize_dimacs(&g)).unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn classification_respects_the_hierarchy((g, m) in graph_and_matching(9), r in 1usize..4) {
        let c = classify_matching(&g, &m, r).unwrap();
        prop_assert!(c.is_matching);
        prop_assert!(!c.is_induced || c.is_acyclic);
        prop_assert!(!c.is_acyclic || c.is_uniquely_restricted);
        // forests are exactly the 1-degenerate graphs
        prop_assert_eq!(c.is_acyclic, c.degeneracy_of_induced <= 1);
        prop_assert_eq!(c.is_r_degenerate, c.degeneracy_of_induced <= r);
        let induced_edges = edges_inside(&g, &m.vertices());
        prop_assert_eq!(c.is_induced, induced_edges == m.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn uniquely_restricted_matches_definition((g, m) in graph_and_matching(8)) {
        let c = classify_matching(&g, &m, 1).unwrap();
        prop_assert_eq!(c.is_uniquely_restricted, brute_is_uniquely_restricted(&g, &m).unwrap());
    }
}

#[test]
fn uniquely_restricted_exhaustive_up_to_five_vertices() {
    for n in 2..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::from_edges(n, edges.iter().copied()).unwrap();
            for pick in 0u32..1 << edges.len() {
                let chosen = edges
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| pick >> i & 1 == 1)
                    .map(|(_, &e)| e);
                let Ok(m) = degmatch::Matching::in_graph(&g, chosen) else {
                    continue;
                };
                let c = classify_matching(&g, &m, 1).unwrap();
                assert_eq!(
                    c.is_uniquely_restricted,
                    brute_is_uniquely_restricted(&g, &m).unwrap(),
                    "{g:?} {m:?}"
                );
            }
        }
    }
}
