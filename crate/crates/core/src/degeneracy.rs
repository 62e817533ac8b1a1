//! Degeneracy by minimum-degree peeling.
//!
//! Among minimum-degree vertices the smallest id is always removed first, so
//! peeling orders (and therefore certificates) are deterministic.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::graph::Graph;

/// A linear order in which each vertex has at most `r` later neighbours.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegeneracyCertificate {
    pub order: Vec<usize>,
    pub r: usize,
}

impl DegeneracyCertificate {
    /// Checks the certificate directly against `g`, independent of how it
    /// was produced.
    pub fn verify(&self, g: &Graph) -> bool {
        if self.order.len() != g.n() {
            return false;
        }
        let mut pos = vec![usize::MAX; g.n()];
        for (i, &v) in self.order.iter().enumerate() {
            if v >= g.n() || pos[v] != usize::MAX {
                return false;
            }
            pos[v] = i;
        }
        self.order
            .iter()
            .enumerate()
            .all(|(i, &v)| g.neighbors(v).iter().filter(|&&w| pos[w] > i).count() <= self.r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegeneracyOutcome {
    /// The graph is r-degenerate; the peeling order proves it.
    Degenerate(DegeneracyCertificate),
    /// Peeling got stuck: every vertex of this induced subgraph has degree > r.
    Stuck(Vec<usize>),
}

impl DegeneracyOutcome {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, DegeneracyOutcome::Degenerate(_))
    }
}

/// Peels the subgraph induced by `members`, stopping early once the minimum
/// degree exceeds `limit`. Returns the removal sequence with the degree each
/// vertex had when it was removed, plus whatever could not be removed.
fn peel(g: &Graph, members: &[usize], limit: usize) -> (Vec<(usize, usize)>, Vec<usize>) {
    let mut inside = vec![false; g.n()];
    for &v in members {
        inside[v] = true;
    }
    let mut deg = vec![0usize; g.n()];
    let mut queue = BTreeSet::new();
    for v in g.vertices().filter(|&v| inside[v]) {
        deg[v] = g.neighbors(v).iter().filter(|&&w| inside[w]).count();
        queue.insert((deg[v], v));
    }
    let mut removed = Vec::with_capacity(queue.len());
    while let Some(&(d, v)) = queue.iter().next() {
        if d > limit {
            break;
        }
        queue.remove(&(d, v));
        inside[v] = false;
        removed.push((v, d));
        for &w in g.neighbors(v) {
            if inside[w] {
                queue.remove(&(deg[w], w));
                deg[w] -= 1;
                queue.insert((deg[w], w));
            }
        }
    }
    let mut stuck: Vec<usize> = queue.into_iter().map(|(_, v)| v).collect();
    stuck.sort_unstable();
    (removed, stuck)
}

pub fn is_r_degenerate(g: &Graph, r: usize) -> DegeneracyOutcome {
    let all: Vec<usize> = g.vertices().collect();
    let (removed, stuck) = peel(g, &all, r);
    if stuck.is_empty() {
        DegeneracyOutcome::Degenerate(DegeneracyCertificate {
            order: removed.into_iter().map(|(v, _)| v).collect(),
            r,
        })
    } else {
        DegeneracyOutcome::Stuck(stuck)
    }
}

/// Exact degeneracy together with a witnessing order.
pub fn degeneracy_order(g: &Graph) -> (usize, Vec<usize>) {
    let all: Vec<usize> = g.vertices().collect();
    let (removed, _) = peel(g, &all, usize::MAX);
    let d = removed.iter().map(|&(_, d)| d).max().unwrap_or(0);
    (d, removed.into_iter().map(|(v, _)| v).collect())
}

pub fn degeneracy(g: &Graph) -> usize {
    degeneracy_order(g).0
}

/// Exact degeneracy of `G[vertices]` without materialising the subgraph.
pub fn degeneracy_of_set(g: &Graph, vertices: &[usize]) -> usize {
    let (removed, _) = peel(g, vertices, usize::MAX);
    removed.iter().map(|&(_, d)| d).max().unwrap_or(0)
}

/// Whether `G[vertices]` is r-degenerate.
pub fn set_is_r_degenerate(g: &Graph, vertices: &[usize], r: usize) -> bool {
    peel(g, vertices, r).1.is_empty()
}
