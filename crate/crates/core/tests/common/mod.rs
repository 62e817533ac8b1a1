#![allow(dead_code)]

use degmatch::generate::{generate, Family, GeneratorSpec};
use degmatch::{Edge, Graph, Matching};
use proptest::prelude::*;

/// Any simple graph on `1..=max_n` vertices.
pub fn any_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

/// A graph with a matching chosen greedily from a random edge order.
pub fn graph_and_matching(max_n: usize) -> impl Strategy<Value = (Graph, Matching)> {
    any_graph(max_n)
        .prop_flat_map(|g| {
            let m = g.m();
            (Just(g), proptest::collection::vec(any::<u32>(), m))
        })
        .prop_map(|(g, keys)| {
            let mut order: Vec<(u32, Edge)> =
                keys.into_iter().zip(g.edges().iter().copied()).collect();
            order.sort();
            let mut used = vec![false; g.n()];
            let mut chosen = Vec::new();
            for (key, e) in order {
                // drop about a third of the candidates so small matchings show up too
                if key % 3 != 0 && !used[e.0] && !used[e.1] {
                    used[e.0] = true;
                    used[e.1] = true;
                    chosen.push((e.0, e.1));
                }
            }
            let m = Matching::in_graph(&g, chosen).unwrap();
            (g, m)
        })
}

/// Seeded chordal instances from every chordal family.
pub fn chordal_instance(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n, 0u64..10_000, 0usize..4).prop_map(|(n, seed, which)| {
        let spec = match which {
            0 => GeneratorSpec::new(Family::RandomChordal, n),
            1 => GeneratorSpec::new(Family::KTree, n).with_k(2),
            2 => GeneratorSpec::new(Family::KTree, n).with_k(3),
            _ => GeneratorSpec::new(Family::Interval, n),
        };
        generate(&spec.with_seed(seed)).unwrap()
    })
}

/// Subsets of `0..n` as sorted vectors.
pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect())
}

/// Edges of `g` with both ends in `set`.
pub fn edges_inside(g: &Graph, set: &[usize]) -> usize {
    g.edges()
        .iter()
        .filter(|e| set.contains(&e.0) && set.contains(&e.1))
        .count()
}

/// Clique number by subset enumeration.
pub fn clique_number(g: &Graph) -> usize {
    subsets(g.n())
        .filter(|s| edges_inside(g, s) == s.len() * s.len().saturating_sub(1) / 2)
        .map(|s| s.len())
        .max()
        .unwrap_or(0)
}

/// Whether some vertex subset of size at least 4 induces a cycle.
pub fn has_chordless_cycle(g: &Graph) -> bool {
    subsets(g.n()).filter(|s| s.len() >= 4).any(|s| {
        let all_deg_two = s
            .iter()
            .all(|&v| g.neighbors(v).iter().filter(|w| s.contains(w)).count() == 2);
        // 2-regular with |S| edges is a cycle iff connected
        all_deg_two && {
            let sub = g.induced_subgraph(&s).unwrap().0;
            sub.is_connected()
        }
    })
}
