//! Maximum r-degenerate matchings of chordal graphs by dynamic programming
//! over a nice clique decomposition.
//!
//! For a node `t` with bag `X_t` and subgraph `G_t` (the union of bags below
//! `t`), a state `(S, N)` with `N ⊆ S ⊆ X_t` records the best value `k` of a
//! matching `M` in `G_t` that avoids edges inside `X_t`, covers exactly `N`
//! within the bag, and keeps `G[V(M) ∪ S]` r-degenerate. `S` is the set of bag
//! vertices reserved for the final matching; since the bag is a clique,
//! `|S| <= r + 1`.
//!
//! Only the best value per `(S, N)` is stored. Every transition is monotone
//! in the value, so this loses nothing and works unchanged for edge weights
//! of either sign.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::Add;

use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use crate::chordal::mcs_order;
use crate::decomposition::{build_nice_decomposition, NiceTreeDecomposition, NodeKind};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::matching::Matching;

/// Values the table can carry: matching sizes or weight sums.
pub trait DpValue: Copy + Ord + Add<Output = Self> + Zero + Debug {}

impl<T: Copy + Ord + Add<Output = T> + Zero + Debug> DpValue for T {}

/// `(S, N)`, both sorted vertex lists with `N ⊆ S`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StateKey {
    pub s: Vec<usize>,
    pub n: Vec<usize>,
}

impl StateKey {
    pub fn new(mut s: Vec<usize>, mut n: Vec<usize>) -> Self {
        s.sort_unstable();
        n.sort_unstable();
        StateKey { s, n }
    }

    pub fn empty() -> Self {
        StateKey::default()
    }

    pub fn is_valid_for(&self, bag: &[usize], r: usize) -> bool {
        let sorted = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        sorted(&self.s)
            && sorted(&self.n)
            && self.s.len() <= r + 1
            && self.s.iter().all(|v| bag.binary_search(v).is_ok())
            && self.n.iter().all(|v| self.s.binary_search(v).is_ok())
    }
}

fn with(v: &[usize], x: usize) -> Vec<usize> {
    let mut out = v.to_vec();
    if let Err(at) = out.binary_search(&x) {
        out.insert(at, x);
    }
    out
}

fn without(v: &[usize], x: usize) -> Vec<usize> {
    v.iter().copied().filter(|&w| w != x).collect()
}

/// How a table entry was derived, for witness reconstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Leaf,
    /// Copied unchanged from the child (introduce without reserving `x`, or
    /// forget with `x ∉ S`).
    Carry {
        child: StateKey,
    },
    /// Introduce node: the new vertex was added to `S`.
    Reserve {
        child: StateKey,
    },
    /// Forget node: the forgotten vertex `x` is matched to bag vertex `y`.
    Match {
        child: StateKey,
        x: usize,
        y: usize,
    },
    /// Forget node: the forgotten vertex was already matched below.
    Release {
        child: StateKey,
    },
    Join {
        left: StateKey,
        right: StateKey,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry<V> {
    pub value: V,
    pub via: Provenance,
}

/// Best value per state for one decomposition node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpTable<V> {
    pub bag: Vec<usize>,
    pub entries: BTreeMap<StateKey, Entry<V>>,
}

impl<V: DpValue> DpTable<V> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &StateKey) -> Option<V> {
        self.entries.get(key).map(|e| e.value)
    }

    /// Keeps the larger value on collision; ties keep the earlier entry.
    fn offer(&mut self, key: StateKey, value: V, via: Provenance) {
        match self.entries.get(&key) {
            Some(e) if e.value >= value => {}
            _ => {
                self.entries.insert(key, Entry { value, via });
            }
        }
    }

    fn check(&self, r: usize) -> Result<()> {
        if let Some(key) = self.entries.keys().find(|k| !k.is_valid_for(&self.bag, r)) {
            return Err(Error::MalformedTable(format!(
                "state {key:?} invalid for bag {:?}",
                self.bag
            )));
        }
        Ok(())
    }
}

/// Upper bound on the number of states over a bag of the given size.
pub fn state_bound(bag_len: usize, r: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for s in 0..=bag_len.min(r + 1) {
        total += binom << s;
        binom = binom * (bag_len - s) as u128 / (s + 1) as u128;
    }
    total
}

pub fn dp_leaf<V: DpValue>() -> DpTable<V> {
    let mut t = DpTable {
        bag: Vec::new(),
        entries: BTreeMap::new(),
    };
    t.offer(StateKey::empty(), V::zero(), Provenance::Leaf);
    t
}

pub fn dp_introduce<V: DpValue>(child: &DpTable<V>, x: usize, r: usize) -> Result<DpTable<V>> {
    child.check(r)?;
    if child.bag.binary_search(&x).is_ok() {
        return Err(Error::MalformedTable(format!("{x} already in child bag")));
    }
    let mut out = DpTable {
        bag: with(&child.bag, x),
        entries: BTreeMap::new(),
    };
    for (key, e) in &child.entries {
        out.offer(
            key.clone(),
            e.value,
            Provenance::Carry { child: key.clone() },
        );
    }
    for (key, e) in &child.entries {
        if key.s.len() <= r {
            let next = StateKey {
                s: with(&key.s, x),
                n: key.n.clone(),
            };
            out.offer(next, e.value, Provenance::Reserve { child: key.clone() });
        }
    }
    Ok(out)
}

fn forget_with<V, F>(child: &DpTable<V>, x: usize, r: usize, edge_value: F) -> Result<DpTable<V>>
where
    V: DpValue,
    F: Fn(usize, usize) -> Result<V>,
{
    child.check(r)?;
    if child.bag.binary_search(&x).is_err() {
        return Err(Error::MalformedTable(format!("{x} not in child bag")));
    }
    let mut out = DpTable {
        bag: without(&child.bag, x),
        entries: BTreeMap::new(),
    };
    // x never reserved
    for (key, e) in &child.entries {
        if key.s.binary_search(&x).is_err() {
            out.offer(
                key.clone(),
                e.value,
                Provenance::Carry { child: key.clone() },
            );
        }
    }
    // x already matched below the bag
    for (key, e) in &child.entries {
        if key.n.binary_search(&x).is_ok() {
            let next = StateKey {
                s: without(&key.s, x),
                n: without(&key.n, x),
            };
            out.offer(next, e.value, Provenance::Release { child: key.clone() });
        }
    }
    // x reserved but unmatched: match it now to a reserved, unmatched y
    for (key, e) in &child.entries {
        if key.s.binary_search(&x).is_err() || key.n.binary_search(&x).is_ok() {
            continue;
        }
        for &y in &key.s {
            if y == x || key.n.binary_search(&y).is_ok() {
                continue;
            }
            let next = StateKey {
                s: without(&key.s, x),
                n: with(&key.n, y),
            };
            let value = e.value + edge_value(x, y)?;
            out.offer(
                next,
                value,
                Provenance::Match {
                    child: key.clone(),
                    x,
                    y,
                },
            );
        }
    }
    Ok(out)
}

/// Forget step counting matched edges.
pub fn dp_forget(child: &DpTable<i64>, x: usize, g: &Graph, r: usize) -> Result<DpTable<i64>> {
    forget_with(child, x, r, |a, b| {
        if g.has_edge(a, b) {
            Ok(1)
        } else {
            Err(Error::NotAnEdge(a, b))
        }
    })
}

/// Forget step summing edge weights.
pub fn dp_forget_weighted(
    child: &DpTable<Rational64>,
    x: usize,
    g: &WeightedGraph,
    r: usize,
) -> Result<DpTable<Rational64>> {
    forget_with(child, x, r, |a, b| g.weight(a, b))
}

pub fn dp_join<V: DpValue>(left: &DpTable<V>, right: &DpTable<V>) -> Result<DpTable<V>> {
    if left.bag != right.bag {
        return Err(Error::MalformedTable(format!(
            "join of bags {:?} and {:?}",
            left.bag, right.bag
        )));
    }
    let mut by_s: BTreeMap<&[usize], Vec<(&StateKey, V)>> = BTreeMap::new();
    for (key, e) in &right.entries {
        by_s.entry(&key.s).or_default().push((key, e.value));
    }
    let mut out = DpTable {
        bag: left.bag.clone(),
        entries: BTreeMap::new(),
    };
    for (lkey, le) in &left.entries {
        let Some(partners) = by_s.get(lkey.s.as_slice()) else {
            continue;
        };
        for &(rkey, rvalue) in partners {
            if lkey.n.iter().any(|v| rkey.n.binary_search(v).is_ok()) {
                continue;
            }
            let mut n: Vec<usize> = lkey.n.iter().chain(&rkey.n).copied().collect();
            n.sort_unstable();
            let next = StateKey {
                s: lkey.s.clone(),
                n,
            };
            out.offer(
                next,
                le.value + rvalue,
                Provenance::Join {
                    left: lkey.clone(),
                    right: rkey.clone(),
                },
            );
        }
    }
    Ok(out)
}

/// A graph with a rational weight on every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    pub graph: Graph,
    weights: BTreeMap<Edge, Rational64>,
}

impl WeightedGraph {
    pub fn new<I>(graph: Graph, weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Rational64)>,
    {
        let mut map = BTreeMap::new();
        for ((u, v), w) in weights {
            if !graph.has_edge(u, v) {
                return Err(Error::NotAnEdge(u, v));
            }
            if map.insert(Edge::new(u, v), w).is_some() {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
        }
        if let Some(e) = graph.edges().iter().find(|e| !map.contains_key(e)) {
            return Err(Error::InvalidParameter(format!("edge {e} has no weight")));
        }
        Ok(WeightedGraph {
            graph,
            weights: map,
        })
    }

    pub fn unit(graph: Graph) -> Self {
        let weights = graph
            .edges()
            .iter()
            .map(|&e| (e, Rational64::from_integer(1)))
            .collect();
        WeightedGraph { graph, weights }
    }

    pub fn weight(&self, u: usize, v: usize) -> Result<Rational64> {
        self.weights
            .get(&Edge::new(u, v))
            .copied()
            .ok_or(Error::NotAnEdge(u, v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DpStats {
    pub nodes: usize,
    pub max_table: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpSolution<V> {
    pub value: V,
    pub matching: Matching,
    pub stats: DpStats,
}

/// Runs the table recursion over every node of `d`, children first.
/// Tables are indexed by node id.
pub fn compute_tables<V, F>(
    d: &NiceTreeDecomposition,
    r: usize,
    edge_value: F,
) -> Result<Vec<DpTable<V>>>
where
    V: DpValue,
    F: Fn(usize, usize) -> Result<V>,
{
    fn get<V>(tables: &[Option<DpTable<V>>], c: usize) -> Result<&DpTable<V>> {
        tables[c]
            .as_ref()
            .ok_or_else(|| Error::Internal(format!("child {c} not computed")))
    }
    let mut tables: Vec<Option<DpTable<V>>> = vec![None; d.len()];
    for t in d.post_order() {
        let node = d.node(t);
        let computed = match (node.kind, node.children.as_slice()) {
            (NodeKind::Leaf, []) => dp_leaf(),
            (NodeKind::Introduce(x), &[c]) => dp_introduce(get(&tables, c)?, x, r)?,
            (NodeKind::Forget(x), &[c]) => forget_with(get(&tables, c)?, x, r, &edge_value)?,
            (NodeKind::Join, &[a, b]) => dp_join(get(&tables, a)?, get(&tables, b)?)?,
            (kind, kids) => {
                return Err(Error::Internal(format!(
                    "node {t}: {kind:?} with {} children",
                    kids.len()
                )))
            }
        };
        if computed.bag != node.bag {
            return Err(Error::Internal(format!(
                "node {t}: table bag {:?} differs from node bag {:?}",
                computed.bag, node.bag
            )));
        }
        tables[t] = Some(computed);
    }
    Ok(tables
        .into_iter()
        .map(|t| t.expect("every node visited"))
        .collect())
}

/// Follows backpointers from the root state `(∅, ∅)`.
pub fn reconstruct<V: DpValue>(
    d: &NiceTreeDecomposition,
    tables: &[DpTable<V>],
) -> Result<Vec<Edge>> {
    let mut edges = Vec::new();
    let mut stack = vec![(d.root, StateKey::empty())];
    while let Some((t, key)) = stack.pop() {
        let entry = tables[t]
            .entries
            .get(&key)
            .ok_or_else(|| Error::Internal(format!("missing backpointer {key:?} at node {t}")))?;
        let kids = &d.node(t).children;
        match &entry.via {
            Provenance::Leaf => {}
            Provenance::Carry { child }
            | Provenance::Reserve { child }
            | Provenance::Release { child } => {
                stack.push((kids[0], child.clone()));
            }
            Provenance::Match { child, x, y } => {
                edges.push(Edge::new(*x, *y));
                stack.push((kids[0], child.clone()));
            }
            Provenance::Join { left, right } => {
                stack.push((kids[0], left.clone()));
                stack.push((kids[1], right.clone()));
            }
        }
    }
    edges.sort_unstable();
    Ok(edges)
}

fn solve<V, F>(g: &Graph, r: usize, edge_value: F) -> Result<DpSolution<V>>
where
    V: DpValue,
    F: Fn(usize, usize) -> Result<V>,
{
    if r < 1 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    let peo = mcs_order(g)?;
    let d = build_nice_decomposition(g, &peo)?;
    let tables = compute_tables(&d, r, edge_value)?;
    let root = &tables[d.root];
    let value = root
        .get(&StateKey::empty())
        .ok_or_else(|| Error::Internal("root table lacks the empty state".into()))?;
    let edges = reconstruct(&d, &tables)?;
    let matching = Matching::in_graph(g, edges.iter().map(|e| (e.0, e.1)))
        .map_err(|e| Error::Internal(format!("reconstructed witness: {e}")))?;
    Ok(DpSolution {
        value,
        matching,
        stats: DpStats {
            nodes: d.len(),
            max_table: tables.iter().map(DpTable::len).max().unwrap_or(0),
        },
    })
}

/// Maximum size of an r-degenerate matching of a chordal graph, with a
/// witness.
pub fn nu_r(g: &Graph, r: usize) -> Result<DpSolution<i64>> {
    solve(g, r, |u, v| {
        if g.has_edge(u, v) {
            Ok(1)
        } else {
            Err(Error::NotAnEdge(u, v))
        }
    })
}

/// Maximum weight of an r-degenerate matching of a chordal graph.
pub fn nu_r_weighted(g: &WeightedGraph, r: usize) -> Result<DpSolution<Rational64>> {
    solve(&g.graph, r, |u, v| g.weight(u, v))
}
