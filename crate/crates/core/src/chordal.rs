//! Chordality recognition by maximum cardinality search.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A vertex order; when produced by [`mcs_order`] it is a perfect
/// elimination order (each vertex's later neighbours form a clique).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationOrder {
    order: Vec<usize>,
    position: Vec<usize>,
}

impl EliminationOrder {
    /// Wraps `order` after checking that it is a permutation of `0..n`.
    /// Does not check the elimination property.
    pub fn new(n: usize, order: Vec<usize>) -> Result<Self> {
        if order.len() != n {
            return Err(Error::InvalidOrder(format!(
                "order has {} entries, graph has {n} vertices",
                order.len()
            )));
        }
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidOrder(format!("unknown vertex {v}")));
            }
            if position[v] != usize::MAX {
                return Err(Error::InvalidOrder(format!("vertex {v} repeated")));
            }
            position[v] = i;
        }
        Ok(EliminationOrder { order, position })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    /// Neighbours of `v` that come after it, sorted by position.
    pub fn later_neighbors(&self, g: &Graph, v: usize) -> Vec<usize> {
        let mut later: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| self.position[w] > self.position[v])
            .collect();
        later.sort_unstable_by_key(|&w| self.position[w]);
        later
    }

    /// Linear-time perfect elimination check: for each vertex `v` with
    /// earliest later neighbour `p`, the remaining later neighbours of `v`
    /// must all be adjacent to `p`. Returns the first offending vertex.
    pub fn first_violation(&self, g: &Graph) -> Option<usize> {
        let n = g.n();
        let mut owed: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut owed_by: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &v in &self.order {
            let later = self.later_neighbors(g, v);
            if let Some((&p, rest)) = later.split_first() {
                owed[p].extend_from_slice(rest);
                owed_by[p].extend(std::iter::repeat_n(v, rest.len()));
            }
        }
        for &p in &self.order {
            for (i, &w) in owed[p].iter().enumerate() {
                if !g.has_edge(p, w) {
                    return Some(owed_by[p][i]);
                }
            }
        }
        None
    }

    pub fn is_perfect(&self, g: &Graph) -> bool {
        self.first_violation(g).is_none()
    }
}

/// Maximum cardinality search, reversed into a candidate elimination order
/// and verified. Ties go to the highest weight, then the smallest id.
pub fn mcs_order(g: &Graph) -> Result<EliminationOrder> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut done = vec![false; n];
    let mut queue: BTreeSet<(Reverse<usize>, usize)> = (0..n).map(|v| (Reverse(0), v)).collect();
    let mut visit = Vec::with_capacity(n);
    while let Some(&(w, v)) = queue.iter().next() {
        queue.remove(&(w, v));
        done[v] = true;
        visit.push(v);
        for &x in g.neighbors(v) {
            if !done[x] {
                queue.remove(&(Reverse(weight[x]), x));
                weight[x] += 1;
                queue.insert((Reverse(weight[x]), x));
            }
        }
    }
    visit.reverse();
    let peo = EliminationOrder::new(n, visit)?;
    match peo.first_violation(g) {
        None => Ok(peo),
        Some(v) => Err(Error::NotChordal(format!(
            "later neighbours of vertex {v} do not form a clique"
        ))),
    }
}

pub fn is_chordal(g: &Graph) -> bool {
    mcs_order(g).is_ok()
}
