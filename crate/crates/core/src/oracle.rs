//! Exhaustive ground truth for small graphs.
//!
//! Nothing here calls into the dynamic program or the greedy coloring; the
//! only shared machinery is the graph type and degeneracy peeling.
//!
//! The matching searches prune a branch as soon as the partial matching
//! stops being r-degenerate. That is sound because r-degeneracy is
//! inherited by induced subgraphs: if `G[V(M)]` is not r-degenerate, neither
//! is `G[V(M')]` for any `M' ⊇ M`.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use crate::decomposition::NiceTreeDecomposition;
use crate::degeneracy::set_is_r_degenerate;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::matching::{classify_matching, Matching};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleLimits {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub timeout_ms: u64,
}

impl OracleLimits {
    /// Defaults for the matching-number searches.
    pub fn matching() -> Self {
        OracleLimits {
            max_vertices: 24,
            max_edges: 60,
            timeout_ms: 60_000,
        }
    }

    /// Defaults for the chromatic-index search.
    pub fn chromatic() -> Self {
        OracleLimits {
            max_vertices: 16,
            max_edges: 20,
            timeout_ms: 120_000,
        }
    }

    /// Defaults for literal state enumeration.
    pub fn states() -> Self {
        OracleLimits {
            max_vertices: 12,
            max_edges: 30,
            timeout_ms: 60_000,
        }
    }

    pub fn unlimited() -> Self {
        OracleLimits {
            max_vertices: 64,
            max_edges: usize::MAX,
            timeout_ms: u64::MAX,
        }
    }

    pub fn check(&self, g: &Graph) -> Result<Deadline> {
        if g.n() > self.max_vertices {
            return Err(Error::LimitsExceeded(format!(
                "{} vertices > {}",
                g.n(),
                self.max_vertices
            )));
        }
        if g.m() > self.max_edges {
            return Err(Error::LimitsExceeded(format!(
                "{} edges > {}",
                g.m(),
                self.max_edges
            )));
        }
        Ok(Deadline::new(self.timeout_ms))
    }
}

/// Wall-clock budget, polled every few thousand search steps.
pub struct Deadline {
    end: Option<Instant>,
    ticks: u32,
}

impl Deadline {
    fn new(timeout_ms: u64) -> Self {
        Deadline {
            end: Instant::now().checked_add(Duration::from_millis(timeout_ms)),
            ticks: 0,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks % 4096 == 1 {
            if let Some(end) = self.end {
                if Instant::now() >= end {
                    return Err(Error::LimitsExceeded("timeout".into()));
                }
            }
        }
        Ok(())
    }
}

/// Calls `visit` once for every matching of `g` (including the empty one).
/// If `r` is set, only r-degenerate matchings are visited and non-degenerate
/// branches are cut.
fn for_each_matching<F>(
    g: &Graph,
    edges: &[Edge],
    r: Option<usize>,
    deadline: &mut Deadline,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&[Edge]) -> Result<()>,
{
    #[allow(clippy::too_many_arguments)]
    fn go<F: FnMut(&[Edge]) -> Result<()>>(
        g: &Graph,
        edges: &[Edge],
        r: Option<usize>,
        i: usize,
        used: &mut Vec<bool>,
        chosen: &mut Vec<Edge>,
        vertices: &mut Vec<usize>,
        deadline: &mut Deadline,
        visit: &mut F,
    ) -> Result<()> {
        deadline.tick()?;
        if i == edges.len() {
            return visit(chosen);
        }
        go(g, edges, r, i + 1, used, chosen, vertices, deadline, visit)?;
        let e = edges[i];
        if used[e.0] || used[e.1] {
            return Ok(());
        }
        vertices.push(e.0);
        vertices.push(e.1);
        if r.is_none_or(|r| set_is_r_degenerate(g, vertices, r)) {
            used[e.0] = true;
            used[e.1] = true;
            chosen.push(e);
            go(g, edges, r, i + 1, used, chosen, vertices, deadline, visit)?;
            chosen.pop();
            used[e.0] = false;
            used[e.1] = false;
        }
        vertices.truncate(vertices.len() - 2);
        Ok(())
    }
    let mut used = vec![false; g.n()];
    go(
        g,
        edges,
        r,
        0,
        &mut used,
        &mut Vec::new(),
        &mut Vec::new(),
        deadline,
        &mut visit,
    )
}

/// Exact maximum size of an r-degenerate matching, by branch and bound.
pub fn brute_nu_r(g: &Graph, r: usize, limits: &OracleLimits) -> Result<usize> {
    let mut deadline = limits.check(g)?;
    let edges = g.edges();
    let mut best = 0usize;

    #[allow(clippy::too_many_arguments)]
    fn go(
        g: &Graph,
        edges: &[Edge],
        r: usize,
        i: usize,
        used: &mut Vec<bool>,
        vertices: &mut Vec<usize>,
        best: &mut usize,
        deadline: &mut Deadline,
    ) -> Result<()> {
        deadline.tick()?;
        let size = vertices.len() / 2;
        *best = (*best).max(size);
        if i == edges.len() {
            return Ok(());
        }
        let free = used.iter().filter(|&&u| !u).count();
        if size + (edges.len() - i).min(free / 2) <= *best {
            return Ok(());
        }
        let e = edges[i];
        if !used[e.0] && !used[e.1] {
            vertices.push(e.0);
            vertices.push(e.1);
            if set_is_r_degenerate(g, vertices, r) {
                used[e.0] = true;
                used[e.1] = true;
                go(g, edges, r, i + 1, used, vertices, best, deadline)?;
                used[e.0] = false;
                used[e.1] = false;
            }
            vertices.truncate(vertices.len() - 2);
        }
        go(g, edges, r, i + 1, used, vertices, best, deadline)
    }

    let mut used = vec![false; g.n()];
    go(
        g,
        edges,
        r,
        0,
        &mut used,
        &mut Vec::new(),
        &mut best,
        &mut deadline,
    )?;
    Ok(best)
}

/// Exact maximum weight of an r-degenerate matching (all matchings are
/// enumerated, so negative weights are handled).
pub fn brute_nu_r_weighted(
    g: &Graph,
    weight: impl Fn(Edge) -> Rational64,
    r: usize,
    limits: &OracleLimits,
) -> Result<Rational64> {
    let mut deadline = limits.check(g)?;
    let mut best = Rational64::zero();
    for_each_matching(g, g.edges(), Some(r), &mut deadline, |m| {
        let w = m.iter().fold(Rational64::zero(), |acc, &e| acc + weight(e));
        if w > best {
            best = w;
        }
        Ok(())
    })?;
    Ok(best)
}

/// Classical and restricted matching numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MatchingNumbers {
    pub nu_s: usize,
    pub nu_1: usize,
    pub nu_ur: usize,
    pub nu: usize,
}

/// `(ν_s, ν_1, ν_ur, ν)` by full enumeration. Unique restriction is checked
/// from the definition: no other matching covers the same vertex set.
pub fn brute_nu_variants(g: &Graph, limits: &OracleLimits) -> Result<MatchingNumbers> {
    let mut deadline = limits.check(g)?;
    if g.n() > 64 {
        return Err(Error::LimitsExceeded(
            "vertex masks hold at most 64 vertices".into(),
        ));
    }
    let mut all: Vec<Vec<Edge>> = Vec::new();
    let mut per_cover: BTreeMap<u64, usize> = BTreeMap::new();
    for_each_matching(g, g.edges(), None, &mut deadline, |m| {
        *per_cover.entry(cover_mask(m)).or_default() += 1;
        all.push(m.to_vec());
        Ok(())
    })?;
    let mut out = MatchingNumbers {
        nu_s: 0,
        nu_1: 0,
        nu_ur: 0,
        nu: 0,
    };
    for m in &all {
        let k = m.len();
        out.nu = out.nu.max(k);
        if per_cover[&cover_mask(m)] == 1 {
            out.nu_ur = out.nu_ur.max(k);
        }
        let matching = Matching::in_graph(g, m.iter().map(|e| (e.0, e.1)))?;
        let class = classify_matching(g, &matching, 1)?;
        if class.is_acyclic {
            out.nu_1 = out.nu_1.max(k);
        }
        if class.is_induced {
            out.nu_s = out.nu_s.max(k);
        }
    }
    Ok(out)
}

fn cover_mask(m: &[Edge]) -> u64 {
    m.iter().fold(0u64, |acc, e| acc | (1 << e.0) | (1 << e.1))
}

/// Definitional unique-restriction test: `m` is the only matching of `g`
/// covering `V(m)`.
pub fn brute_is_uniquely_restricted(g: &Graph, m: &Matching) -> Result<bool> {
    let target: BTreeSet<usize> = m.vertices().into_iter().collect();
    let inside: Vec<Edge> = g
        .edges()
        .iter()
        .copied()
        .filter(|e| target.contains(&e.0) && target.contains(&e.1))
        .collect();
    let mut count = 0usize;
    let mut deadline = OracleLimits::matching().check(g)?;
    for_each_matching(g, &inside, None, &mut deadline, |cand| {
        if cand.len() * 2 == target.len() {
            count += 1;
        }
        Ok(())
    })?;
    Ok(count == 1)
}

/// Exact r-degenerate chromatic index by backtracking over edges. A new
/// color may only be opened as the next unused index.
pub fn brute_chromatic_index_r(g: &Graph, r: usize, limits: &OracleLimits) -> Result<usize> {
    chromatic_search(g, Some(r), limits)
}

/// Exact classical chromatic index by the same search without the
/// degeneracy constraint.
pub fn brute_chromatic_index(g: &Graph, limits: &OracleLimits) -> Result<usize> {
    chromatic_search(g, None, limits)
}

fn chromatic_search(g: &Graph, r: Option<usize>, limits: &OracleLimits) -> Result<usize> {
    let mut deadline = limits.check(g)?;
    let edges = g.edges();
    // every edge in its own class is always feasible
    let mut best = edges.len();
    let floor = g.max_degree();

    struct Class {
        vertices: Vec<usize>,
    }

    #[allow(clippy::too_many_arguments)]
    fn go(
        g: &Graph,
        edges: &[Edge],
        r: Option<usize>,
        i: usize,
        classes: &mut Vec<Class>,
        best: &mut usize,
        floor: usize,
        deadline: &mut Deadline,
    ) -> Result<()> {
        deadline.tick()?;
        if classes.len() >= *best || *best == floor {
            return Ok(());
        }
        if i == edges.len() {
            *best = classes.len();
            return Ok(());
        }
        let e = edges[i];
        for c in 0..classes.len() {
            let vs = &mut classes[c].vertices;
            if vs.contains(&e.0) || vs.contains(&e.1) {
                continue;
            }
            vs.push(e.0);
            vs.push(e.1);
            let ok = r.is_none_or(|r| set_is_r_degenerate(g, vs, r));
            if ok {
                go(g, edges, r, i + 1, classes, best, floor, deadline)?;
            }
            let vs = &mut classes[c].vertices;
            vs.truncate(vs.len() - 2);
        }
        if classes.len() + 1 < *best {
            classes.push(Class {
                vertices: vec![e.0, e.1],
            });
            go(g, edges, r, i + 1, classes, best, floor, deadline)?;
            classes.pop();
        }
        Ok(())
    }

    go(
        g,
        edges,
        r,
        0,
        &mut Vec::new(),
        &mut best,
        floor,
        &mut deadline,
    )?;
    Ok(best)
}

/// A literal DP state `(S, N, k)`.
pub type StateTriple = (Vec<usize>, Vec<usize>, usize);

/// The full state set at decomposition node `t`: every matching of `G_t`
/// avoiding edges inside the bag, paired with every `S` between its bag
/// cover `N` and the bag that keeps `G[V(M) ∪ S]` r-degenerate.
pub fn brute_degenerate_states(
    g: &Graph,
    d: &NiceTreeDecomposition,
    r: usize,
    t: usize,
    limits: &OracleLimits,
) -> Result<BTreeSet<StateTriple>> {
    let mut deadline = limits.check(g)?;
    let bag = &d.node(t).bag;
    if bag.len() > 20 {
        return Err(Error::LimitsExceeded("bag too large to enumerate".into()));
    }
    let sub: BTreeSet<usize> = d.subtree_vertices(t).into_iter().collect();
    let in_bag = |v: usize| bag.binary_search(&v).is_ok();
    let edges: Vec<Edge> = g
        .edges()
        .iter()
        .copied()
        .filter(|e| sub.contains(&e.0) && sub.contains(&e.1) && !(in_bag(e.0) && in_bag(e.1)))
        .collect();
    let mut out = BTreeSet::new();
    for_each_matching(g, &edges, None, &mut deadline, |m| {
        let covered: Vec<usize> = m.iter().flat_map(|e| [e.0, e.1]).collect();
        let n: Vec<usize> = bag
            .iter()
            .copied()
            .filter(|v| covered.contains(v))
            .collect();
        let free: Vec<usize> = bag.iter().copied().filter(|v| !n.contains(v)).collect();
        for mask in 0u32..(1 << free.len()) {
            let mut s = n.clone();
            s.extend(
                free.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v),
            );
            s.sort_unstable();
            let mut vs = covered.clone();
            vs.extend(s.iter().filter(|v| !covered.contains(v)));
            if set_is_r_degenerate(g, &vs, r) {
                out.insert((s, n.clone(), m.len()));
            }
        }
        Ok(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn lim() -> OracleLimits {
        OracleLimits::matching()
    }

    #[test]
    fn nu_r_small_examples() {
        assert_eq!(brute_nu_r(&path(4), 1, &lim()).unwrap(), 2);
        assert_eq!(brute_nu_r(&cycle(4), 1, &lim()).unwrap(), 1);
        assert_eq!(brute_nu_r(&complete(4), 3, &lim()).unwrap(), 2);
        assert_eq!(brute_nu_r(&path(6), 1, &lim()).unwrap(), 3);
        assert_eq!(brute_nu_r(&path(4), 0, &lim()).unwrap(), 0);
    }

    #[test]
    fn nu_r_complete_bipartite() {
        for delta in 1..=4 {
            for r in 1..=4 {
                let g = complete_bipartite(delta, delta);
                assert_eq!(
                    brute_nu_r(&g, r, &lim()).unwrap(),
                    r.min(delta),
                    "Δ={delta} r={r}"
                );
            }
        }
    }

    #[test]
    fn variants_examples() {
        let v = |g: &Graph| {
            let m = brute_nu_variants(g, &lim()).unwrap();
            (m.nu_s, m.nu_1, m.nu_ur, m.nu)
        };
        assert_eq!(v(&cycle(4)), (1, 1, 1, 2));
        assert_eq!(v(&path(4)), (1, 2, 2, 2));
        assert_eq!(v(&complete(2)), (1, 1, 1, 1));
    }

    #[test]
    fn chromatic_examples() {
        let c = OracleLimits::chromatic();
        assert_eq!(
            brute_chromatic_index_r(&complete_bipartite(3, 3), 1, &c).unwrap(),
            9
        );
        assert_eq!(brute_chromatic_index_r(&complete(2), 1, &c).unwrap(), 1);
        assert_eq!(brute_chromatic_index_r(&complete(2), 5, &c).unwrap(), 1);
        assert_eq!(brute_chromatic_index_r(&complete(4), 2, &c).unwrap(), 6);
        assert_eq!(brute_chromatic_index_r(&cycle(5), 1, &c).unwrap(), 3);
        assert_eq!(brute_chromatic_index(&cycle(5), &c).unwrap(), 3);
        assert_eq!(brute_chromatic_index(&Graph::empty(3), &c).unwrap(), 0);
    }

    #[test]
    fn limits_are_enforced_up_front() {
        let g = path(30);
        assert!(matches!(
            brute_chromatic_index_r(&g, 1, &OracleLimits::chromatic()),
            Err(Error::LimitsExceeded(_))
        ));
    }

    #[test]
    fn timeout_fires() {
        let g = complete(12);
        let tight = OracleLimits {
            timeout_ms: 0,
            ..OracleLimits::unlimited()
        };
        assert!(matches!(
            brute_chromatic_index_r(&g, 1, &tight),
            Err(Error::LimitsExceeded(_))
        ));
    }

    #[test]
    fn pruning_rests_on_heredity() {
        // Adding vertices never lowers degeneracy, so a non-degenerate
        // partial matching has no degenerate extension.
        let g = complete(6);
        let base = [0, 1, 2, 3];
        assert!(!set_is_r_degenerate(&g, &base, 2));
        assert!(!set_is_r_degenerate(&g, &[0, 1, 2, 3, 4, 5], 2));
        assert_eq!(brute_nu_r(&g, 2, &lim()).unwrap(), 1);
    }

    #[test]
    fn definitional_unique_restriction() {
        let c4 = cycle(4);
        let m = Matching::in_graph(&c4, [(0, 1), (2, 3)]).unwrap();
        assert!(!brute_is_uniquely_restricted(&c4, &m).unwrap());
        let p4 = path(4);
        let m = Matching::in_graph(&p4, [(0, 1), (2, 3)]).unwrap();
        assert!(brute_is_uniquely_restricted(&p4, &m).unwrap());
    }
}
