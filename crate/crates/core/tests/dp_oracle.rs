mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use degmatch::decomposition::NodeKind;
use degmatch::dp::{compute_tables, state_bound, StateKey};
use degmatch::oracle::{
    brute_degenerate_states, brute_nu_r, brute_nu_variants, OracleLimits, StateTriple,
};
use degmatch::{build_nice_decomposition, mcs_order, nu_r, Graph, NiceTreeDecomposition};
use proptest::prelude::*;

type States = BTreeSet<StateTriple>;

fn without(v: &[usize], x: usize) -> Vec<usize> {
    v.iter().copied().filter(|&w| w != x).collect()
}

fn with(v: &[usize], x: usize) -> Vec<usize> {
    let mut out = v.to_vec();
    out.push(x);
    out.sort_unstable();
    out
}

/// The table recursion without keeping only the best value per `(S, N)`.
fn full_states(g: &Graph, d: &NiceTreeDecomposition, r: usize) -> Vec<States> {
    let mut sets: Vec<States> = vec![BTreeSet::new(); d.len()];
    for t in d.post_order() {
        let node = d.node(t);
        let out: States = match node.kind {
            NodeKind::Leaf => [(vec![], vec![], 0)].into(),
            NodeKind::Introduce(x) => {
                let child = &sets[node.children[0]];
                let mut out = child.clone();
                for (s, n, k) in child {
                    if s.len() <= r {
                        out.insert((with(s, x), n.clone(), *k));
                    }
                }
                out
            }
            NodeKind::Forget(x) => {
                let mut out = BTreeSet::new();
                for (s, n, k) in &sets[node.children[0]] {
                    if !s.contains(&x) {
                        out.insert((s.clone(), n.clone(), *k));
                    } else if n.contains(&x) {
                        out.insert((without(s, x), without(n, x), *k));
                    } else {
                        for &y in s.iter().filter(|y| **y != x && !n.contains(y)) {
                            assert!(g.has_edge(x, y), "bag is a clique");
                            out.insert((without(s, x), with(n, y), k + 1));
                        }
                    }
                }
                out
            }
            NodeKind::Join => {
                let (a, b) = (&sets[node.children[0]], &sets[node.children[1]]);
                let mut out = BTreeSet::new();
                for (s1, n1, k1) in a {
                    for (s2, n2, k2) in b {
                        if s1 == s2 && n1.iter().all(|v| !n2.contains(v)) {
                            let mut n: Vec<usize> = n1.iter().chain(n2).copied().collect();
                            n.sort_unstable();
                            out.insert((s1.clone(), n, k1 + k2));
                        }
                    }
                }
                out
            }
        };
        sets[t] = out;
    }
    sets
}

fn best_per_key(states: &States) -> BTreeMap<StateKey, i64> {
    let mut best = BTreeMap::new();
    for (s, n, k) in states {
        let e = best
            .entry(StateKey::new(s.clone(), n.clone()))
            .or_insert(0i64);
        *e = (*e).max(*k as i64);
    }
    best
}

fn decompose(g: &Graph) -> NiceTreeDecomposition {
    build_nice_decomposition(g, &mcs_order(g).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn unpruned_recursion_equals_brute_states(g in chordal_instance(8), r in 1usize..4) {
        let d = decompose(&g);
        let full = full_states(&g, &d, r);
        for (t, states) in full.iter().enumerate() {
            let brute = brute_degenerate_states(&g, &d, r, t, &OracleLimits::states()).unwrap();
            prop_assert_eq!(states, &brute, "node {}", t);
        }
    }

    #[test]
    fn tables_are_pruned_brute_states(g in chordal_instance(8), r in 1usize..4) {
        let d = decompose(&g);
        let tables = compute_tables::<i64, _>(&d, r, |_, _| Ok(1)).unwrap();
        for (t, table) in tables.iter().enumerate() {
            let brute = brute_degenerate_states(&g, &d, r, t, &OracleLimits::states()).unwrap();
            let got: BTreeMap<StateKey, i64> = table.entries.iter().map(|(k, e)| (k.clone(), e.value)).collect();
            prop_assert_eq!(got, best_per_key(&brute), "node {}", t);
        }
    }

    #[test]
    fn tables_are_downward_closed_and_bounded(g in chordal_instance(12), r in 1usize..4) {
        let d = decompose(&g);
        let tables = compute_tables::<i64, _>(&d, r, |_, _| Ok(1)).unwrap();
        for table in &tables {
            let b = table.bag.len();
            // Σ_{s ≤ r+1} C(b, s)·2^s, counted directly
            let direct = subsets(b).filter(|s| s.len() <= r + 1).map(|s| 1u128 << s.len()).sum::<u128>();
            prop_assert_eq!(state_bound(b, r), direct);
            prop_assert!(table.len() as u128 <= direct);
            for (key, e) in &table.entries {
                for drop in key.s.iter().filter(|v| !key.n.contains(v)) {
                    let smaller = StateKey::new(without(&key.s, *drop), key.n.clone());
                    prop_assert!(table.get(&smaller).is_some_and(|v| v >= e.value));
                }
            }
        }
    }

    #[test]
    fn nu_r_is_monotone_and_reaches_nu(g in chordal_instance(11)) {
        let delta = g.max_degree().max(1);
        let values: Vec<i64> = (1..=delta + 1).map(|r| nu_r(&g, r).unwrap().value).collect();
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        let nu = brute_nu_variants(&g, &OracleLimits::matching()).unwrap().nu as i64;
        prop_assert_eq!(values[delta - 1], nu);
        prop_assert_eq!(values[0], brute_nu_r(&g, 1, &OracleLimits::matching()).unwrap() as i64);
    }
}
