//! Nice tree decompositions of chordal graphs whose bags are cliques.
//!
//! Shape rules: the tree is rooted and binary; the root and every leaf have
//! empty bags; a join node has two children with bags equal to its own; an
//! introduce node adds exactly one vertex to its child's bag and a forget
//! node removes exactly one.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::chordal::EliminationOrder;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub kind: NodeKind,
    /// Sorted vertex set.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<TreeNode>,
    pub root: usize,
}

/// Slack factor in the node-count bound `nodes <= c * n * width + 1`.
pub const SIZE_FACTOR: usize = 6;

impl NiceTreeDecomposition {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn max_bag(&self) -> usize {
        self.nodes.iter().map(|t| t.bag.len()).max().unwrap_or(0)
    }

    /// Node ids ordered so that every child precedes its parent.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((t, expanded)) = stack.pop() {
            if expanded {
                out.push(t);
            } else {
                stack.push((t, true));
                for &c in self.nodes[t].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Parent of every node; `None` for the root.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.nodes.len()];
        for (t, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                parent[c] = Some(t);
            }
        }
        parent
    }

    /// Vertices of `G_t`: the union of bags in the subtree rooted at `t`.
    pub fn subtree_vertices(&self, t: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![t];
        while let Some(s) = stack.pop() {
            out.extend_from_slice(&self.nodes[s].bag);
            stack.extend_from_slice(&self.nodes[s].children);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = DecompositionJson {
            root: self.root,
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(id, t)| {
                    let (kind, vertex) = match t.kind {
                        NodeKind::Leaf => ("leaf", None),
                        NodeKind::Introduce(v) => ("introduce", Some(v)),
                        NodeKind::Forget(v) => ("forget", Some(v)),
                        NodeKind::Join => ("join", None),
                    };
                    NodeJson {
                        id,
                        kind: kind.to_string(),
                        vertex,
                        bag: t.bag.clone(),
                        children: t.children.clone(),
                    }
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("decomposition serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: DecompositionJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut nodes = Vec::with_capacity(doc.nodes.len());
        for (i, n) in doc.nodes.into_iter().enumerate() {
            if n.id != i {
                return Err(Error::Parse(format!(
                    "node at position {i} has id {}",
                    n.id
                )));
            }
            let need = |v: Option<usize>| {
                v.ok_or_else(|| Error::Parse(format!("node {i}: {} needs a vertex", n.kind)))
            };
            let kind = match n.kind.as_str() {
                "leaf" => NodeKind::Leaf,
                "introduce" => NodeKind::Introduce(need(n.vertex)?),
                "forget" => NodeKind::Forget(need(n.vertex)?),
                "join" => NodeKind::Join,
                other => return Err(Error::Parse(format!("unknown node kind {other:?}"))),
            };
            nodes.push(TreeNode {
                kind,
                bag: n.bag,
                children: n.children,
            });
        }
        Ok(NiceTreeDecomposition {
            nodes,
            root: doc.root,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    root: usize,
    nodes: Vec<NodeJson>,
}

#[derive(Serialize, Deserialize)]
struct NodeJson {
    id: usize,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    vertex: Option<usize>,
    bag: Vec<usize>,
    children: Vec<usize>,
}

struct Builder {
    nodes: Vec<TreeNode>,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(TreeNode {
            kind,
            bag,
            children,
        });
        self.nodes.len() - 1
    }

    /// Walks from node `from` up to a node whose bag is `target`: forgets
    /// first, then introduces, each in ascending vertex order. Forgetting
    /// first keeps every intermediate bag a subset of a clique.
    fn transition(&mut self, from: usize, target: &[usize]) -> usize {
        let mut top = from;
        let mut bag = self.nodes[from].bag.clone();
        let drop: Vec<usize> = bag
            .iter()
            .copied()
            .filter(|v| !target.contains(v))
            .collect();
        let add: Vec<usize> = target
            .iter()
            .copied()
            .filter(|v| !bag.contains(v))
            .collect();
        for v in drop {
            bag.retain(|&x| x != v);
            top = self.push(NodeKind::Forget(v), bag.clone(), vec![top]);
        }
        for v in add {
            let at = bag.binary_search(&v).unwrap_err();
            bag.insert(at, v);
            top = self.push(NodeKind::Introduce(v), bag.clone(), vec![top]);
        }
        top
    }

    /// Left-deep chain of join nodes over branches that all end in `bag`.
    fn join_all(&mut self, branches: Vec<usize>, bag: &[usize]) -> usize {
        let mut iter = branches.into_iter();
        let mut acc = iter.next().expect("at least one branch");
        for b in iter {
            acc = self.push(NodeKind::Join, bag.to_vec(), vec![acc, b]);
        }
        acc
    }
}

/// Builds a nice decomposition from a perfect elimination order.
///
/// Each vertex `v` gets the clique bag `{v} ∪ later(v)`, hung below the bag of
/// its earliest later neighbour. Children are attached in ascending vertex
/// order; components are joined under the empty root in ascending order of
/// their last-eliminated vertex.
pub fn build_nice_decomposition(
    g: &Graph,
    peo: &EliminationOrder,
) -> Result<NiceTreeDecomposition> {
    if peo.order().len() != g.n() {
        return Err(Error::InvalidOrder(
            "order length does not match graph".into(),
        ));
    }
    if let Some(v) = peo.first_violation(g) {
        return Err(Error::InvalidOrder(format!(
            "later neighbours of {v} are not a clique"
        )));
    }
    let n = g.n();
    let mut bags: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut roots = Vec::new();
    for &v in peo.order() {
        let later = peo.later_neighbors(g, v);
        match later.first() {
            Some(&p) => kids[p].push(v),
            None => roots.push(v),
        }
        let mut bag = later;
        bag.push(v);
        bag.sort_unstable();
        bags[v] = bag;
    }

    let mut b = Builder { nodes: Vec::new() };
    let mut top = vec![usize::MAX; n];
    // children precede parents in the elimination order
    for &v in peo.order() {
        let bag = &bags[v];
        let mut children = kids[v].clone();
        children.sort_unstable();
        let branches: Vec<usize> = if children.is_empty() {
            let leaf = b.push(NodeKind::Leaf, Vec::new(), Vec::new());
            vec![b.transition(leaf, bag)]
        } else {
            children
                .iter()
                .map(|&c| b.transition(top[c], bag))
                .collect()
        };
        top[v] = b.join_all(branches, bag);
    }

    roots.sort_unstable();
    let root = if roots.is_empty() {
        b.push(NodeKind::Leaf, Vec::new(), Vec::new())
    } else {
        let branches: Vec<usize> = roots.iter().map(|&v| b.transition(top[v], &[])).collect();
        b.join_all(branches, &[])
    };
    Ok(NiceTreeDecomposition {
        nodes: b.nodes,
        root,
    })
}

/// The decomposition axiom that failed first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Structure,
    RootLeafEmpty,
    Join,
    Introduce,
    Forget,
    VertexCoverage,
    EdgeCoverage,
    Connectivity,
    CliqueBag,
    ForgetUniqueness,
    Size,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Structure => "structure",
            Axiom::RootLeafEmpty => "root-leaf-empty",
            Axiom::Join => "join",
            Axiom::Introduce => "introduce",
            Axiom::Forget => "forget",
            Axiom::VertexCoverage => "vertex-coverage",
            Axiom::EdgeCoverage => "edge-coverage",
            Axiom::Connectivity => "connectivity",
            Axiom::CliqueBag => "clique-bag",
            Axiom::ForgetUniqueness => "forget-uniqueness",
            Axiom::Size => "size",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub node: Option<usize>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Some(t) => write!(f, "{} (node {t}): {}", self.axiom, self.detail),
            None => write!(f, "{}: {}", self.axiom, self.detail),
        }
    }
}

fn fail<T>(
    axiom: Axiom,
    node: Option<usize>,
    detail: impl Into<String>,
) -> std::result::Result<T, Violation> {
    Err(Violation {
        axiom,
        node,
        detail: detail.into(),
    })
}

/// Checks every structural and decomposition axiom, reporting the first one
/// violated.
pub fn validate_decomposition(
    g: &Graph,
    d: &NiceTreeDecomposition,
) -> std::result::Result<(), Violation> {
    use Axiom::*;
    let count = d.nodes.len();
    if d.root >= count {
        return fail(Structure, None, format!("root {} out of range", d.root));
    }
    let mut parent = vec![None; count];
    for (t, node) in d.nodes.iter().enumerate() {
        if node.children.len() > 2 {
            return fail(Structure, Some(t), "more than two children");
        }
        for &c in &node.children {
            if c >= count {
                return fail(Structure, Some(t), format!("child {c} out of range"));
            }
            if parent[c].is_some() || c == d.root {
                return fail(Structure, Some(c), "node has more than one parent");
            }
            parent[c] = Some(t);
        }
        if node.bag.windows(2).any(|w| w[0] >= w[1]) {
            return fail(Structure, Some(t), "bag not sorted or has duplicates");
        }
        if let Some(&v) = node.bag.iter().find(|&&v| v >= g.n()) {
            return fail(Structure, Some(t), format!("unknown vertex {v}"));
        }
    }
    // every node reachable from the root exactly once
    let reached = d.post_order();
    if reached.len() != count {
        return fail(Structure, None, "tree is not connected from the root");
    }

    for (t, node) in d.nodes.iter().enumerate() {
        let is_leaf = node.children.is_empty();
        if (t == d.root || is_leaf) && !node.bag.is_empty() {
            return fail(RootLeafEmpty, Some(t), "root or leaf with nonempty bag");
        }
        match (node.kind, node.children.as_slice()) {
            (NodeKind::Leaf, []) => {}
            (NodeKind::Join, &[a, b]) => {
                if d.nodes[a].bag != node.bag || d.nodes[b].bag != node.bag {
                    return fail(Join, Some(t), "child bags differ from join bag");
                }
            }
            (NodeKind::Introduce(x), &[c]) => {
                let child = &d.nodes[c].bag;
                let mut expect = child.clone();
                if child.contains(&x) {
                    return fail(Introduce, Some(t), format!("{x} already in child bag"));
                }
                expect.push(x);
                expect.sort_unstable();
                if expect != node.bag {
                    return fail(Introduce, Some(t), format!("bag is not child bag plus {x}"));
                }
            }
            (NodeKind::Forget(x), &[c]) => {
                let child = &d.nodes[c].bag;
                let mut expect = child.clone();
                if !child.contains(&x) {
                    return fail(Forget, Some(t), format!("{x} not in child bag"));
                }
                expect.retain(|&v| v != x);
                if expect != node.bag {
                    return fail(Forget, Some(t), format!("bag is not child bag minus {x}"));
                }
            }
            (kind, kids) => {
                return fail(
                    Structure,
                    Some(t),
                    format!("{kind:?} node with {} children", kids.len()),
                )
            }
        }
    }

    let mut seen = vec![false; g.n()];
    for node in &d.nodes {
        for &v in &node.bag {
            seen[v] = true;
        }
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return fail(VertexCoverage, None, format!("vertex {v} in no bag"));
    }
    for e in g.edges() {
        let covered = d
            .nodes
            .iter()
            .any(|t| t.bag.binary_search(&e.0).is_ok() && t.bag.binary_search(&e.1).is_ok());
        if !covered {
            return fail(EdgeCoverage, None, format!("edge {e} in no bag"));
        }
    }
    // bags holding v are connected iff exactly one of them has a parent without v
    let mut tops = vec![0usize; g.n()];
    for (t, node) in d.nodes.iter().enumerate() {
        for &v in &node.bag {
            let parent_has = parent[t].is_some_and(|p| d.nodes[p].bag.binary_search(&v).is_ok());
            if !parent_has {
                tops[v] += 1;
            }
        }
    }
    if let Some(v) = tops.iter().position(|&c| c != 1) {
        return fail(
            Connectivity,
            None,
            format!("bags containing {v} are disconnected"),
        );
    }
    for (t, node) in d.nodes.iter().enumerate() {
        if !g.is_clique(&node.bag) {
            return fail(
                CliqueBag,
                Some(t),
                format!("bag {:?} is not a clique", node.bag),
            );
        }
    }
    let mut forgets = vec![0usize; g.n()];
    for node in &d.nodes {
        if let NodeKind::Forget(v) = node.kind {
            forgets[v] += 1;
        }
    }
    if let Some(v) = forgets.iter().position(|&c| c != 1) {
        return fail(
            ForgetUniqueness,
            None,
            format!("vertex {v} forgotten {} times", forgets[v]),
        );
    }
    let bound = SIZE_FACTOR * g.n() * d.max_bag().max(1) + 1;
    if count > bound {
        return fail(Size, None, format!("{count} nodes exceeds bound {bound}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chordal::mcs_order;
    use crate::graph::named::*;

    fn nice(g: &Graph) -> NiceTreeDecomposition {
        build_nice_decomposition(g, &mcs_order(g).unwrap()).unwrap()
    }

    #[test]
    fn single_vertex_chain() {
        let g = Graph::empty(1);
        let d = nice(&g);
        let kinds: Vec<NodeKind> = d.post_order().iter().map(|&t| d.nodes[t].kind).collect();
        assert_eq!(
            kinds,
            vec![NodeKind::Leaf, NodeKind::Introduce(0), NodeKind::Forget(0)]
        );
        assert!(d.nodes[d.root].bag.is_empty());
        validate_decomposition(&g, &d).unwrap();
    }

    #[test]
    fn k2_has_full_bag() {
        let g = complete(2);
        let d = nice(&g);
        assert!(d.nodes.iter().any(|t| t.bag == vec![0, 1]));
        validate_decomposition(&g, &d).unwrap();
    }

    #[test]
    fn empty_graph_is_a_single_leaf() {
        let g = Graph::empty(0);
        let d = nice(&g);
        assert_eq!(d.len(), 1);
        validate_decomposition(&g, &d).unwrap();
    }

    #[test]
    fn disconnected_components_join_under_empty_root() {
        let g = Graph::from_edges(5, [(0, 1), (2, 3)]).unwrap();
        let d = nice(&g);
        validate_decomposition(&g, &d).unwrap();
        assert_eq!(d.nodes[d.root].kind, NodeKind::Join);
        assert!(d.nodes[d.root].bag.is_empty());
    }

    #[test]
    fn rejects_invalid_peo() {
        let p4 = path(4);
        let bad = EliminationOrder::new(4, vec![1, 0, 2, 3]).unwrap();
        assert!(matches!(
            build_nice_decomposition(&p4, &bad),
            Err(Error::InvalidOrder(_))
        ));
    }

    #[test]
    fn missing_edge_is_reported() {
        // K2 decomposed as if it had no edge
        let g = complete(2);
        let d = NiceTreeDecomposition {
            nodes: vec![
                TreeNode {
                    kind: NodeKind::Leaf,
                    bag: vec![],
                    children: vec![],
                },
                TreeNode {
                    kind: NodeKind::Introduce(0),
                    bag: vec![0],
                    children: vec![0],
                },
                TreeNode {
                    kind: NodeKind::Forget(0),
                    bag: vec![],
                    children: vec![1],
                },
                TreeNode {
                    kind: NodeKind::Introduce(1),
                    bag: vec![1],
                    children: vec![2],
                },
                TreeNode {
                    kind: NodeKind::Forget(1),
                    bag: vec![],
                    children: vec![3],
                },
            ],
            root: 4,
        };
        assert_eq!(
            validate_decomposition(&g, &d).unwrap_err().axiom,
            Axiom::EdgeCoverage
        );
    }

    #[test]
    fn non_clique_bag_is_reported() {
        let g = path(3);
        let chain = [
            (NodeKind::Leaf, vec![]),
            (NodeKind::Introduce(0), vec![0]),
            (NodeKind::Introduce(1), vec![0, 1]),
            (NodeKind::Introduce(2), vec![0, 1, 2]),
            (NodeKind::Forget(0), vec![1, 2]),
            (NodeKind::Forget(1), vec![2]),
            (NodeKind::Forget(2), vec![]),
        ];
        let nodes = chain
            .into_iter()
            .enumerate()
            .map(|(i, (kind, bag))| TreeNode {
                kind,
                bag,
                children: if i == 0 { vec![] } else { vec![i - 1] },
            })
            .collect();
        let d = NiceTreeDecomposition { nodes, root: 6 };
        let v = validate_decomposition(&g, &d).unwrap_err();
        assert_eq!(v.axiom, Axiom::CliqueBag);
        assert_eq!(v.axiom.to_string(), "clique-bag");
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let d = nice(&g);
        let json = d.to_json();
        assert_eq!(json["nodes"][0]["kind"], "leaf");
        assert_eq!(NiceTreeDecomposition::from_json(&json).unwrap(), d);
    }
}
