//! Matchings and their place in the induced / acyclic / uniquely restricted
//! hierarchy.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::degeneracy::degeneracy_of_set;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// A set of pairwise vertex-disjoint edges.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Matching {
    edges: Vec<Edge>,
}

impl Matching {
    /// Checks disjointness only; use [`Matching::in_graph`] to also check the
    /// edges exist.
    pub fn new<I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut edges: Vec<Edge> = edges.into_iter().map(|(u, v)| Edge::new(u, v)).collect();
        edges.sort_unstable();
        let mut seen = BTreeSet::new();
        for e in &edges {
            if e.0 == e.1 {
                return Err(Error::NotAMatching(format!("loop at {}", e.0)));
            }
            for x in [e.0, e.1] {
                if !seen.insert(x) {
                    return Err(Error::NotAMatching(format!("vertex {x} covered twice")));
                }
            }
        }
        Ok(Matching { edges })
    }

    pub fn in_graph<I>(g: &Graph, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let m = Matching::new(edges)?;
        m.check_edges(g)?;
        Ok(m)
    }

    fn check_edges(&self, g: &Graph) -> Result<()> {
        for e in &self.edges {
            if !g.has_edge(e.0, e.1) {
                return Err(Error::NotAnEdge(e.0, e.1));
            }
        }
        Ok(())
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `V(M)`, sorted.
    pub fn vertices(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self.edges.iter().flat_map(|e| [e.0, e.1]).collect();
        vs.sort_unstable();
        vs
    }

    /// The matched partner of `x`, if any.
    pub fn mate(&self, x: usize) -> Option<usize> {
        self.edges.iter().find(|e| e.touches(x)).map(|e| e.other(x))
    }

    pub fn as_pairs(&self) -> Vec<[usize; 2]> {
        self.edges.iter().map(|e| [e.0, e.1]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MatchingClass {
    pub is_matching: bool,
    pub is_induced: bool,
    pub is_acyclic: bool,
    pub is_uniquely_restricted: bool,
    /// Exact degeneracy of `G[V(M)]`.
    pub degeneracy_of_induced: usize,
    /// Whether `degeneracy_of_induced <= r` for the `r` passed to
    /// [`classify_matching`].
    pub is_r_degenerate: bool,
}

/// Classifies `m` in `g`. The degeneracy is computed exactly, so the same
/// result answers the r-degeneracy question for every `r`.
pub fn classify_matching(g: &Graph, m: &Matching, r: usize) -> Result<MatchingClass> {
    m.check_edges(g)?;
    let vs = m.vertices();
    let induced_edges = g.edges_within(&vs);
    let degeneracy_of_induced = degeneracy_of_set(g, &vs);
    Ok(MatchingClass {
        is_matching: true,
        is_induced: induced_edges == m.len(),
        is_acyclic: is_forest(g, &vs),
        is_uniquely_restricted: is_uniquely_restricted(g, m),
        degeneracy_of_induced,
        is_r_degenerate: degeneracy_of_induced <= r,
    })
}

/// `G[vertices]` is a forest iff union-find never sees an edge close a cycle.
fn is_forest(g: &Graph, vertices: &[usize]) -> bool {
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut inside = vec![false; g.n()];
    for &v in vertices {
        inside[v] = true;
    }
    for &v in vertices {
        for &w in g.neighbors(v) {
            if w > v && inside[w] {
                let (a, b) = (find(&mut parent, v), find(&mut parent, w));
                if a == b {
                    return false;
                }
                parent[a] = b;
            }
        }
    }
    true
}

/// `M` is uniquely restricted iff `H = G[V(M)]` has no perfect matching
/// besides `M`. Any other one misses some `e ∈ M`, so it suffices that
/// `H − e` has no perfect matching for every `e ∈ M`. Each check is one
/// general maximum matching (Edmonds' blossom algorithm, via petgraph).
fn is_uniquely_restricted(g: &Graph, m: &Matching) -> bool {
    let vs = m.vertices();
    let (h, map) = match g.induced_subgraph(&vs) {
        Ok(sub) => sub,
        Err(_) => return false,
    };
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in map.iter().enumerate() {
        local[v] = i;
    }
    m.edges().iter().all(|skip| {
        let skip = Edge::new(local[skip.0], local[skip.1]);
        let edges = h
            .edges()
            .iter()
            .filter(|&&e| e != skip)
            .map(|e| (e.0 as u32, e.1 as u32));
        let mut pg = petgraph::graph::UnGraph::<(), ()>::from_edges(edges);
        // from_edges only creates nodes up to the largest endpoint
        while pg.node_count() < h.n() {
            pg.add_node(());
        }
        !petgraph::algo::maximum_matching(&pg).is_perfect()
    })
}
