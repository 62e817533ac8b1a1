//! Greedy r-degenerate edge coloring within the palette
//! `K = ⌊2(Δ−1)²/(r+1) + 2(Δ−1) + 1⌋`.
//!
//! An uncolored edge `uv` may not take a color already present at `u` or `v`
//! (the set `F1`), nor a color α for which
//! `d_u^α + 2·d_{u,v}^α + d_v^α ≥ r + 1` (the set `F2`). Here `d_u^α` counts
//! vertices of `N(u) \ N[v]` touched by an α-edge, `d_v^α` likewise on the
//! `v` side, and `d_{u,v}^α` counts common neighbours touched by α. Any color
//! outside `F1 ∪ F2` keeps its class an r-degenerate matching: one of `u`, `v`
//! then has at most `r − 1` class neighbours besides its partner and can be
//! peeled first, after which the other has at most `r`. Counting gives
//! `|F1| ≤ 2(Δ−1)` and `(r+1)|F2| ≤ 2(Δ−1)²`, so a color is always free.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use crate::degeneracy::set_is_r_degenerate;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// Palette size for maximum degree `delta` and degeneracy `r`.
///
/// ```
/// use degmatch::coloring::palette_size;
/// assert_eq!(palette_size(3, 1), 9);
/// assert_eq!(palette_size(4, 3), 11);
/// ```
pub fn palette_size(delta: usize, r: usize) -> usize {
    assert!(delta >= 1 && r >= 1, "palette needs delta >= 1 and r >= 1");
    let d = delta - 1;
    2 * d * d / (r + 1) + 2 * d + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Palette {
    pub k: usize,
    pub delta: usize,
    pub r: usize,
}

impl Palette {
    pub fn new(delta: usize, r: usize) -> Self {
        Palette {
            k: palette_size(delta, r),
            delta,
            r,
        }
    }

    /// `2(Δ−1)`, the most colors adjacent edges can block.
    pub fn adjacent_cap(&self) -> usize {
        2 * (self.delta - 1)
    }

    /// `⌊2(Δ−1)²/(r+1)⌋`, the most colors the degeneracy test can block.
    pub fn degeneracy_cap(&self) -> usize {
        2 * (self.delta - 1).pow(2) / (self.r + 1)
    }
}

/// A (possibly partial) assignment of colors `1..` to edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    color: BTreeMap<Edge, usize>,
    at_vertex: Vec<BTreeSet<usize>>,
}

impl EdgeColoring {
    pub fn new(n: usize) -> Self {
        EdgeColoring {
            color: BTreeMap::new(),
            at_vertex: vec![BTreeSet::new(); n],
        }
    }

    /// Records a color without checking class validity.
    pub fn assign(&mut self, e: Edge, c: usize) -> Result<()> {
        if self.color.contains_key(&e) {
            return Err(Error::AlreadyColored(e.0, e.1));
        }
        for x in [e.0, e.1] {
            if x >= self.at_vertex.len() {
                return Err(Error::UnknownVertex {
                    vertex: x,
                    n: self.at_vertex.len(),
                });
            }
        }
        self.color.insert(e, c);
        self.at_vertex[e.0].insert(c);
        self.at_vertex[e.1].insert(c);
        Ok(())
    }

    pub fn color_of(&self, e: Edge) -> Option<usize> {
        self.color.get(&e).copied()
    }

    pub fn len(&self) -> usize {
        self.color.len()
    }

    pub fn is_empty(&self) -> bool {
        self.color.is_empty()
    }

    /// Colors present on edges at `v`.
    pub fn colors_at(&self, v: usize) -> &BTreeSet<usize> {
        &self.at_vertex[v]
    }

    pub fn classes(&self) -> BTreeMap<usize, Vec<Edge>> {
        let mut out: BTreeMap<usize, Vec<Edge>> = BTreeMap::new();
        for (&e, &c) in &self.color {
            out.entry(c).or_default().push(e);
        }
        out
    }

    pub fn colors_used(&self) -> usize {
        self.color.values().collect::<BTreeSet<_>>().len()
    }

    pub fn max_color(&self) -> usize {
        self.color.values().copied().max().unwrap_or(0)
    }
}

/// The vertex and edge sets around an edge `uv`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalNeighborhoods {
    /// `N(u) \ N[v]`
    pub n_u: Vec<usize>,
    /// `N(v) \ N[u]`
    pub n_v: Vec<usize>,
    /// `N(u) ∩ N(v)`
    pub n_uv: Vec<usize>,
    pub e_u: Vec<Edge>,
    pub e_v: Vec<Edge>,
    pub e_uv: Vec<Edge>,
    /// For each `w` in the three sets, edges at `w` avoiding `u` and `v`.
    pub e_w: BTreeMap<usize, Vec<Edge>>,
}

impl LocalNeighborhoods {
    pub fn around(g: &Graph, u: usize, v: usize) -> Self {
        let nu: BTreeSet<usize> = g.neighbors(u).iter().copied().filter(|&w| w != v).collect();
        let nv: BTreeSet<usize> = g.neighbors(v).iter().copied().filter(|&w| w != u).collect();
        let n_u: Vec<usize> = nu.difference(&nv).copied().collect();
        let n_v: Vec<usize> = nv.difference(&nu).copied().collect();
        let n_uv: Vec<usize> = nu.intersection(&nv).copied().collect();
        let e_u = n_u.iter().map(|&w| Edge::new(u, w)).collect();
        let e_v = n_v.iter().map(|&w| Edge::new(v, w)).collect();
        let e_uv = n_uv
            .iter()
            .flat_map(|&w| [Edge::new(u, w), Edge::new(v, w)])
            .collect();
        let e_w = n_u
            .iter()
            .chain(&n_v)
            .chain(&n_uv)
            .map(|&w| {
                let edges = g
                    .neighbors(w)
                    .iter()
                    .filter(|&&x| x != u && x != v)
                    .map(|&x| Edge::new(w, x))
                    .collect();
                (w, edges)
            })
            .collect();
        LocalNeighborhoods {
            n_u,
            n_v,
            n_uv,
            e_u,
            e_v,
            e_uv,
            e_w,
        }
    }
}

/// The colors blocked for `uv`: `F1` by adjacency, `F2` by the degeneracy
/// count. The two sets are disjoint.
pub fn forbidden_sets(
    g: &Graph,
    partial: &EdgeColoring,
    uv: Edge,
    r: usize,
) -> Result<(BTreeSet<usize>, BTreeSet<usize>)> {
    if !g.has_edge(uv.0, uv.1) {
        return Err(Error::NotAnEdge(uv.0, uv.1));
    }
    if partial.color_of(uv).is_some() {
        return Err(Error::AlreadyColored(uv.0, uv.1));
    }
    let (u, v) = (uv.0, uv.1);
    let f1: BTreeSet<usize> = partial
        .colors_at(u)
        .union(partial.colors_at(v))
        .copied()
        .collect();
    let local = LocalNeighborhoods::around(g, u, v);
    let mut weight: BTreeMap<usize, usize> = BTreeMap::new();
    for (set, factor) in [(&local.n_u, 1), (&local.n_v, 1), (&local.n_uv, 2)] {
        for &w in set {
            for &c in partial.colors_at(w) {
                if !f1.contains(&c) {
                    *weight.entry(c).or_default() += factor;
                }
            }
        }
    }
    let f2 = weight
        .into_iter()
        .filter(|&(_, total)| total > r)
        .map(|(c, _)| c)
        .collect();
    Ok((f1, f2))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum EdgeOrder {
    /// Lexicographic by endpoint ids.
    #[default]
    Lexicographic,
    /// Lexicographic, then shuffled with the given seed.
    Shuffled(u64),
    Custom(Vec<Edge>),
}

impl EdgeOrder {
    pub fn edges(&self, g: &Graph) -> Result<Vec<Edge>> {
        match self {
            EdgeOrder::Lexicographic => Ok(g.edges().to_vec()),
            EdgeOrder::Shuffled(seed) => {
                let mut edges = g.edges().to_vec();
                edges.shuffle(&mut SplitMix64::seed_from_u64(*seed));
                Ok(edges)
            }
            EdgeOrder::Custom(edges) => {
                let mut sorted = edges.clone();
                sorted.sort_unstable();
                if sorted != g.edges() {
                    return Err(Error::InvalidParameter(
                        "custom order must list every edge exactly once".into(),
                    ));
                }
                Ok(edges.clone())
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct GreedyOptions {
    pub order: EdgeOrder,
    /// Palette Δ; must be at least the graph's maximum degree.
    pub delta: Option<usize>,
    /// Re-verify the touched class after every assignment.
    pub check_each_step: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyColoring {
    pub coloring: EdgeColoring,
    pub palette: Palette,
    /// Largest `|F1|` and `|F2|` seen over all steps.
    pub max_f1: usize,
    pub max_f2: usize,
}

/// Colors every edge with the smallest color outside `F1 ∪ F2`.
pub fn greedy_color(g: &Graph, r: usize, opts: &GreedyOptions) -> Result<GreedyColoring> {
    if r < 1 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    let delta = match opts.delta {
        Some(d) if d < g.max_degree() => {
            return Err(Error::InvalidParameter(format!(
                "delta {d} below maximum degree {}",
                g.max_degree()
            )))
        }
        Some(d) => d.max(1),
        None => g.max_degree().max(1),
    };
    let palette = Palette::new(delta, r);
    let mut coloring = EdgeColoring::new(g.n());
    let (mut max_f1, mut max_f2) = (0, 0);
    let check_each_step = opts.check_each_step || cfg!(debug_assertions);
    for e in opts.order.edges(g)? {
        let (f1, f2) = forbidden_sets(g, &coloring, e, r)?;
        if f1.len() > palette.adjacent_cap() {
            return Err(Error::Internal(format!(
                "edge {e}: |F1| = {} exceeds 2(Δ−1) = {}",
                f1.len(),
                palette.adjacent_cap()
            )));
        }
        if f2.len() > palette.degeneracy_cap() {
            return Err(Error::Internal(format!(
                "edge {e}: |F2| = {} exceeds ⌊2(Δ−1)²/(r+1)⌋ = {}",
                f2.len(),
                palette.degeneracy_cap()
            )));
        }
        max_f1 = max_f1.max(f1.len());
        max_f2 = max_f2.max(f2.len());
        let c = (1..=palette.k)
            .find(|c| !f1.contains(c) && !f2.contains(c))
            .ok_or_else(|| Error::Internal(format!("no color available for edge {e}")))?;
        coloring.assign(e, c)?;
        if check_each_step {
            let class: Vec<Edge> = coloring.classes().remove(&c).unwrap_or_default();
            if let Err(v) = check_class(g, c, &class, r) {
                return Err(Error::Internal(format!("after coloring {e}: {v}")));
            }
        }
    }
    Ok(GreedyColoring {
        coloring,
        palette,
        max_f1,
        max_f2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Uncolored,
    NotAnEdge,
    Matching,
    Degeneracy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoringViolation {
    pub kind: ViolationKind,
    pub color: Option<usize>,
    pub detail: String,
}

impl std::fmt::Display for ColoringViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.detail)
    }
}

fn check_class(
    g: &Graph,
    c: usize,
    class: &[Edge],
    r: usize,
) -> std::result::Result<(), ColoringViolation> {
    let mut covered = BTreeSet::new();
    for e in class {
        if !g.has_edge(e.0, e.1) {
            return Err(ColoringViolation {
                kind: ViolationKind::NotAnEdge,
                color: Some(c),
                detail: format!("{e} is not an edge"),
            });
        }
        for x in [e.0, e.1] {
            if !covered.insert(x) {
                return Err(ColoringViolation {
                    kind: ViolationKind::Matching,
                    color: Some(c),
                    detail: format!("color {c} appears twice at vertex {x}"),
                });
            }
        }
    }
    let vs: Vec<usize> = covered.into_iter().collect();
    if !set_is_r_degenerate(g, &vs, r) {
        return Err(ColoringViolation {
            kind: ViolationKind::Degeneracy,
            color: Some(c),
            detail: format!("class {c} induces a subgraph that is not {r}-degenerate"),
        });
    }
    Ok(())
}

/// Checks that every edge is colored and every class is an r-degenerate
/// matching.
pub fn verify_coloring(
    g: &Graph,
    c: &EdgeColoring,
    r: usize,
) -> std::result::Result<(), ColoringViolation> {
    if let Some(e) = g.edges().iter().find(|&&e| c.color_of(e).is_none()) {
        return Err(ColoringViolation {
            kind: ViolationKind::Uncolored,
            color: None,
            detail: format!("edge {e} has no color"),
        });
    }
    for (color, class) in c.classes() {
        check_class(g, color, &class, r)?;
    }
    Ok(())
}
