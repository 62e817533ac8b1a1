//! Deterministic instance generators.
//!
//! All randomness comes from `SplitMix64` (64-bit state) seeded with
//! `GeneratorSpec::seed`, so a given spec yields the same graph on every
//! platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{named, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Path,
    Cycle,
    Complete,
    CompleteBipartite,
    KTree,
    RandomChordal,
    RandomBoundedDegree,
    Interval,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::InvalidParameter(format!("unknown family {s:?}")))
    }
}

/// Which graph to build. Unused parameters are ignored.
///
/// * `path`, `cycle`, `complete`, `interval`: `n`
/// * `complete-bipartite`: `a`, `b`
/// * `k-tree`: `n`, `k` (new vertices attach to `k`-cliques)
/// * `random-chordal`: `n`, `k` (clique-size cap, default 4), `p` (chance a
///   vertex starts a new component, default 0.05)
/// * `random-bounded-degree`: `n`, `p` (edge probability), `delta_cap`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    #[serde(default)]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_cap: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize) -> Self {
        GeneratorSpec {
            family,
            n,
            k: None,
            a: None,
            b: None,
            p: None,
            delta_cap: None,
            seed: 0,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_delta_cap(mut self, cap: usize) -> Self {
        self.delta_cap = Some(cap);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn bipartite(a: usize, b: usize) -> Self {
        GeneratorSpec {
            a: Some(a),
            b: Some(b),
            ..GeneratorSpec::new(Family::CompleteBipartite, a + b)
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn probability(p: Option<f64>, default: f64) -> Result<f64> {
    let p = p.unwrap_or(default);
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("probability {p} outside [0, 1]")));
    }
    Ok(p)
}

pub fn generate(spec: &GeneratorSpec) -> Result<Graph> {
    let mut rng = SplitMix64::seed_from_u64(spec.seed);
    let n = spec.n;
    match spec.family {
        Family::Path => Ok(named::path(n)),
        Family::Cycle => {
            if n < 3 {
                return Err(invalid("cycle needs n >= 3"));
            }
            Ok(named::cycle(n))
        }
        Family::Complete => Ok(named::complete(n)),
        Family::CompleteBipartite => {
            let (Some(a), Some(b)) = (spec.a, spec.b) else {
                return Err(invalid("complete-bipartite needs a and b"));
            };
            Ok(named::complete_bipartite(a, b))
        }
        Family::KTree => k_tree(
            n,
            spec.k.ok_or_else(|| invalid("k-tree needs k"))?,
            &mut rng,
        ),
        Family::RandomChordal => {
            let cap = spec.k.unwrap_or(4);
            if cap < 1 {
                return Err(invalid("clique cap k must be at least 1"));
            }
            random_chordal(n, cap, probability(spec.p, 0.05)?, &mut rng)
        }
        Family::RandomBoundedDegree => {
            let cap = spec
                .delta_cap
                .ok_or_else(|| invalid("random-bounded-degree needs delta_cap"))?;
            bounded_degree(n, probability(spec.p, 0.5)?, cap, &mut rng)
        }
        Family::Interval => interval(n, &mut rng),
    }
}

/// Starts from `K_{k+1}`; each further vertex is joined to a uniformly
/// chosen existing `k`-clique.
fn k_tree(n: usize, k: usize, rng: &mut SplitMix64) -> Result<Graph> {
    if k < 1 {
        return Err(invalid("k-tree needs k >= 1"));
    }
    if n <= k + 1 {
        return Ok(named::complete(n));
    }
    let mut edges: Vec<(usize, usize)> = (0..=k)
        .flat_map(|u| (u + 1..=k).map(move |v| (u, v)))
        .collect();
    let mut cliques: Vec<Vec<usize>> = (0..=k)
        .map(|skip| (0..=k).filter(|&v| v != skip).collect())
        .collect();
    for v in k + 1..n {
        let base = cliques[rng.gen_range(0..cliques.len())].clone();
        edges.extend(base.iter().map(|&u| (u, v)));
        for skip in 0..k {
            let mut next: Vec<usize> = base.iter().copied().filter(|&u| u != base[skip]).collect();
            next.push(v);
            cliques.push(next);
        }
    }
    Graph::from_edges(n, edges)
}

/// Simplicial growth: each new vertex picks a known clique and attaches to a
/// random nonempty subset of it (at most `cap − 1` vertices), or with
/// probability `fresh` to nothing. The attachment set plus the new vertex is
/// recorded as a new clique.
fn random_chordal(n: usize, cap: usize, fresh: f64, rng: &mut SplitMix64) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if cliques.is_empty() || cap == 1 || rng.gen_bool(fresh) {
            cliques.push(vec![v]);
            continue;
        }
        let base = &cliques[rng.gen_range(0..cliques.len())];
        let size = rng.gen_range(1..=base.len().min(cap - 1));
        let mut pick = base.clone();
        pick.shuffle(rng);
        pick.truncate(size);
        pick.sort_unstable();
        edges.extend(pick.iter().map(|&u| (u, v)));
        pick.push(v);
        cliques.push(pick);
    }
    Graph::from_edges(n, edges)
}

/// Scans vertex pairs in lexicographic order, keeping each with probability
/// `p` unless it would push an endpoint above `cap`.
fn bounded_degree(n: usize, p: f64, cap: usize, rng: &mut SplitMix64) -> Result<Graph> {
    let mut deg = vec![0usize; n];
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) && deg[u] < cap && deg[v] < cap {
                deg[u] += 1;
                deg[v] += 1;
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Intersection graph of `n` intervals with integer endpoints in `[0, 2n]`.
fn interval(n: usize, rng: &mut SplitMix64) -> Result<Graph> {
    let spans: Vec<(usize, usize)> = (0..n)
        .map(|_| {
            let (a, b) = (rng.gen_range(0..=2 * n), rng.gen_range(0..=2 * n));
            (a.min(b), a.max(b))
        })
        .collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if spans[u].0.max(spans[v].0) <= spans[u].1.min(spans[v].1) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chordal::is_chordal;

    #[test]
    fn complete_bipartite_spec() {
        let g = generate(&GeneratorSpec::bipartite(3, 3)).unwrap();
        assert_eq!((g.n(), g.m(), g.max_degree()), (6, 9, 3));
    }

    #[test]
    fn chordal_families_are_chordal() {
        for seed in 0..30 {
            let specs = [
                GeneratorSpec::new(Family::RandomChordal, 12).with_seed(seed),
                GeneratorSpec::new(Family::KTree, 10)
                    .with_k(3)
                    .with_seed(seed),
                GeneratorSpec::new(Family::Interval, 12).with_seed(seed),
            ];
            for spec in specs {
                assert!(is_chordal(&generate(&spec).unwrap()), "{spec:?}");
            }
        }
    }

    #[test]
    fn k_tree_edge_count() {
        // K_{k+1} plus k edges per further vertex
        let g = generate(&GeneratorSpec::new(Family::KTree, 8).with_k(2).with_seed(1)).unwrap();
        assert_eq!(g.m(), 3 + 2 * 5);
    }

    #[test]
    fn bounded_degree_respects_cap() {
        for seed in 0..20 {
            let spec = GeneratorSpec::new(Family::RandomBoundedDegree, 40)
                .with_p(0.3)
                .with_delta_cap(5)
                .with_seed(seed);
            assert!(generate(&spec).unwrap().max_degree() <= 5);
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let spec = GeneratorSpec::new(Family::RandomChordal, 30).with_seed(42);
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = spec.clone().with_seed(43);
        assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn rejects_infeasible() {
        assert!(generate(&GeneratorSpec::new(Family::Cycle, 2)).is_err());
        assert!(generate(&GeneratorSpec::new(Family::KTree, 5)).is_err());
        assert!(generate(&GeneratorSpec::new(Family::RandomBoundedDegree, 5)).is_err());
        assert!(generate(&GeneratorSpec::new(Family::RandomChordal, 5).with_p(1.5)).is_err());
    }

    #[test]
    fn spec_json_and_family_names() {
        let spec: GeneratorSpec =
            serde_json::from_str(r#"{"family":"k-tree","n":8,"k":2,"seed":7}"#).unwrap();
        assert_eq!(spec.family, Family::KTree);
        assert_eq!(
            "random-bounded-degree".parse::<Family>().unwrap(),
            Family::RandomBoundedDegree
        );
        assert!("blob".parse::<Family>().is_err());
    }
}
