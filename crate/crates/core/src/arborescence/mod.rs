//! Arborescences, their tree order, and the normality machinery built on top:
//! the normal assistant, cycle certificates, sensitive orders, depth-first
//! search trees, separation checks and level partitions.

mod assistant;
mod dfs;
mod order;
mod separation;

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, Edge, VertexId, VertexSet};

pub use assistant::{
    check_normal, is_normal, normal_assistant, normalize_cycle, tpath_endpoints, CycleCertificate,
    NormalAssistant, Normality,
};
pub use dfs::{dfs_build, is_dfs_tree, Priority};
pub use order::{
    is_sensitive, sensitive_order_build, LinearExtension, OrderOutcome, Sensitivity,
    SensitivityChecker, Violation,
};
pub use separation::{level_partition, separation_check, LevelEntry, LevelReport, Separation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArborError {
    #[error("not an arborescence: {0}")]
    NotAnArborescence(String),
    #[error("tree edge ({}, {}) is not an edge of the host digraph", .0 .0, .0 .1)]
    EdgeMissingFromHost(Edge),
    #[error("tree vertex {0} is not a vertex of the host digraph")]
    VertexMissingFromHost(VertexId),
    #[error("vertex {0} is not in the tree")]
    VertexNotInTree(VertexId),
    #[error("root {0} is not a vertex of the digraph")]
    RootMissing(VertexId),
    #[error("the tree does not span the set of vertices reachable from its root")]
    NotSpanningReachableSet,
    #[error("vertices {0} and {1} are comparable in the tree order")]
    ComparableVertices(VertexId, VertexId),
    #[error("{w} precedes {v} in the normal order, so the separation hypothesis fails")]
    PreconditionOrderViolated { v: VertexId, w: VertexId },
    #[error("the arborescence is not normal in the host")]
    NotNormalInput(CycleCertificate),
    #[error("not a linear extension of the tree order: {0}")]
    NotALinearExtension(String),
    #[error("not a cycle of the normal assistant: {0}")]
    NotACycle(String),
}

/// A rooted oriented tree with a directed path from the root to every vertex.
///
/// Tree edges point away from the root. `v <=_T w` holds when the tree path
/// from the root to `w` passes through `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arborescence {
    root: VertexId,
    parent: BTreeMap<VertexId, VertexId>,
    children: BTreeMap<VertexId, Vec<VertexId>>,
    level: BTreeMap<VertexId, usize>,
    enter: BTreeMap<VertexId, usize>,
    exit: BTreeMap<VertexId, usize>,
}

impl Arborescence {
    pub fn singleton(root: VertexId) -> Self {
        Arborescence::new(root, std::iter::empty()).expect("a single root is a tree")
    }

    /// Builds from `(parent, child)` edges.
    pub fn new<I: IntoIterator<Item = Edge>>(root: VertexId, edges: I) -> Result<Self, ArborError> {
        let mut parent = BTreeMap::new();
        for (p, c) in edges {
            if c == root {
                return Err(ArborError::NotAnArborescence(format!("root {root} has parent {p}")));
            }
            if p == c {
                return Err(ArborError::NotAnArborescence(format!("loop at {c}")));
            }
            if let Some(old) = parent.insert(c, p) {
                return Err(ArborError::NotAnArborescence(format!(
                    "vertex {c} has two parents {old} and {p}"
                )));
            }
        }
        Arborescence::from_parents(root, parent)
    }

    pub fn from_raw(root: u32, edges: &[(u32, u32)]) -> Result<Self, ArborError> {
        Arborescence::new(
            VertexId(root),
            edges.iter().map(|&(a, b)| (VertexId(a), VertexId(b))),
        )
    }

    /// Builds from a child-to-parent map.
    pub fn from_parents(
        root: VertexId,
        parent: BTreeMap<VertexId, VertexId>,
    ) -> Result<Self, ArborError> {
        if parent.contains_key(&root) {
            return Err(ArborError::NotAnArborescence(format!("root {root} has a parent")));
        }
        let mut children: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        children.insert(root, Vec::new());
        for (&c, &p) in &parent {
            children.entry(p).or_default().push(c);
            children.entry(c).or_default();
        }
        for kids in children.values_mut() {
            kids.sort_unstable();
        }
        let mut level = BTreeMap::new();
        let mut enter = BTreeMap::new();
        let mut exit = BTreeMap::new();
        let mut clock = 0usize;
        let mut stack: Vec<(VertexId, usize)> = vec![(root, 0)];
        level.insert(root, 0usize);
        enter.insert(root, clock);
        clock += 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            let kids = &children[&v];
            if *next < kids.len() {
                let c = kids[*next];
                *next += 1;
                if enter.contains_key(&c) {
                    return Err(ArborError::NotAnArborescence(format!("vertex {c} reached twice")));
                }
                level.insert(c, level[&v] + 1);
                enter.insert(c, clock);
                clock += 1;
                stack.push((c, 0));
            } else {
                exit.insert(v, clock);
                clock += 1;
                stack.pop();
            }
        }
        if let Some(v) = children.keys().find(|v| !enter.contains_key(v)) {
            return Err(ArborError::NotAnArborescence(format!(
                "vertex {v} is not reachable from the root {root}"
            )));
        }
        Ok(Arborescence {
            root,
            parent,
            children,
            level,
            enter,
            exit,
        })
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.children.keys().copied()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.children.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.children.contains_key(&v)
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent.get(&v).copied()
    }

    /// Children in ascending id order.
    pub fn children(&self, v: VertexId) -> &[VertexId] {
        self.children.get(&v).map_or(&[], Vec::as_slice)
    }

    /// Tree edges `(parent, child)` sorted by parent then child.
    pub fn edges(&self) -> Vec<Edge> {
        let mut e: Vec<Edge> = self.parent.iter().map(|(&c, &p)| (p, c)).collect();
        e.sort_unstable();
        e
    }

    pub fn is_tree_edge(&self, p: VertexId, c: VertexId) -> bool {
        self.parent.get(&c) == Some(&p)
    }

    fn require(&self, v: VertexId) -> Result<(), ArborError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(ArborError::VertexNotInTree(v))
        }
    }

    /// Distance from the root. Panics outside the tree; see [`tree_query`].
    pub fn level(&self, v: VertexId) -> usize {
        self.level[&v]
    }

    pub fn height(&self) -> usize {
        self.level.values().copied().max().unwrap_or(0)
    }

    pub fn leq(&self, v: VertexId, w: VertexId) -> bool {
        match (self.enter.get(&v), self.enter.get(&w)) {
            (Some(ev), Some(ew)) => ev <= ew && self.exit[&w] <= self.exit[&v],
            _ => false,
        }
    }

    pub fn comparable(&self, v: VertexId, w: VertexId) -> bool {
        self.leq(v, w) || self.leq(w, v)
    }

    /// `⌈v⌉`: `v` and everything above it.
    pub fn up_closure(&self, v: VertexId) -> VertexSet {
        let mut out = VertexSet::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            out.insert(x);
            stack.extend_from_slice(self.children(x));
        }
        out
    }

    /// `⌊v⌋`: the chain from the root to `v`.
    pub fn down_closure(&self, v: VertexId) -> VertexSet {
        self.root_path(v).into_iter().collect()
    }

    /// Down-closure of a set.
    pub fn down_closure_of(&self, xs: &VertexSet) -> VertexSet {
        xs.iter()
            .filter(|x| self.contains(**x))
            .flat_map(|&x| self.root_path(x))
            .collect()
    }

    /// Vertices from the root to `v`, in tree order.
    pub fn root_path(&self, v: VertexId) -> Vec<VertexId> {
        let mut path = vec![v];
        let mut x = v;
        while let Some(p) = self.parent(x) {
            path.push(p);
            x = p;
        }
        path.reverse();
        path
    }

    /// The largest common element of `⌊v⌋` and `⌊w⌋`.
    pub fn meet(&self, v: VertexId, w: VertexId) -> VertexId {
        let (mut a, mut b) = (v, w);
        while self.level[&a] > self.level[&b] {
            a = self.parent[&a];
        }
        while self.level[&b] > self.level[&a] {
            b = self.parent[&b];
        }
        while a != b {
            a = self.parent[&a];
            b = self.parent[&b];
        }
        a
    }

    /// Euler-tour entry time; `leq(v, w)` iff `w`'s entry lies in `v`'s interval.
    pub fn entry_time(&self, v: VertexId) -> Option<usize> {
        self.enter.get(&v).copied()
    }

    pub fn exit_time(&self, v: VertexId) -> Option<usize> {
        self.exit.get(&v).copied()
    }

    /// `L_0, L_1, ...`, each sorted by id.
    pub fn levels(&self) -> Vec<Vec<VertexId>> {
        let mut out: Vec<Vec<VertexId>> = vec![Vec::new(); self.height() + 1];
        for (&v, &l) in &self.level {
            out[l].push(v);
        }
        out
    }

    /// Pre-order traversal with children visited in the order `sibling_order`
    /// returns for each parent.
    pub fn preorder_with<F>(&self, mut sibling_order: F) -> Vec<VertexId>
    where
        F: FnMut(VertexId) -> Vec<VertexId>,
    {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            let kids = sibling_order(v);
            stack.extend(kids.into_iter().rev());
        }
        out
    }

    /// Vertices in breadth-first order from the root.
    pub fn bfs_order(&self) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.len());
        let mut queue = VecDeque::from([self.root]);
        while let Some(v) = queue.pop_front() {
            out.push(v);
            queue.extend(self.children(v).iter().copied());
        }
        out
    }

    /// True when the tree is a single directed path from the root.
    pub fn is_path(&self) -> bool {
        self.children.values().all(|c| c.len() <= 1)
    }

    pub fn to_document(&self) -> ArborescenceDocument {
        ArborescenceDocument {
            root: self.root.0,
            edges: self.edges().into_iter().map(|(p, c)| [p.0, c.0]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("arborescence serializes")
    }

    /// Checks that every tree vertex and tree edge lives in `d`.
    pub fn check_in_host(&self, d: &Digraph) -> Result<(), ArborError> {
        if let Some(v) = self.vertices().find(|v| !d.has_vertex(*v)) {
            return Err(ArborError::VertexMissingFromHost(v));
        }
        if let Some(e) = self.edges().into_iter().find(|&(p, c)| !d.has_edge(p, c)) {
            return Err(ArborError::EdgeMissingFromHost(e));
        }
        Ok(())
    }
}

/// Wire form: `{"root":int,"edges":[[parent,child]...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArborescenceDocument {
    pub root: u32,
    pub edges: Vec<[u32; 2]>,
}

impl TryFrom<ArborescenceDocument> for Arborescence {
    type Error = ArborError;

    fn try_from(doc: ArborescenceDocument) -> Result<Self, ArborError> {
        Arborescence::new(
            VertexId(doc.root),
            doc.edges.iter().map(|[p, c]| (VertexId(*p), VertexId(*c))),
        )
    }
}

impl Serialize for Arborescence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_document().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Arborescence {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let doc = ArborescenceDocument::deserialize(de)?;
        Arborescence::try_from(doc).map_err(serde::de::Error::custom)
    }
}

pub fn load_arborescence(document: &str) -> Result<Arborescence, ArborError> {
    let doc: ArborescenceDocument = serde_json::from_str(document)
        .map_err(|e| ArborError::NotAnArborescence(e.to_string()))?;
    Arborescence::try_from(doc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeQuery {
    Leq(VertexId, VertexId),
    UpClosure(VertexId),
    DownClosure(VertexId),
    Meet(VertexId, VertexId),
    Level(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum TreeAnswer {
    Bool(bool),
    Set(VertexSet),
    Vertex(VertexId),
    Level(usize),
}

/// Checked tree-order queries.
pub fn tree_query(t: &Arborescence, query: &TreeQuery) -> Result<TreeAnswer, ArborError> {
    Ok(match *query {
        TreeQuery::Leq(v, w) => {
            t.require(v)?;
            t.require(w)?;
            TreeAnswer::Bool(t.leq(v, w))
        }
        TreeQuery::UpClosure(v) => {
            t.require(v)?;
            TreeAnswer::Set(t.up_closure(v))
        }
        TreeQuery::DownClosure(v) => {
            t.require(v)?;
            TreeAnswer::Set(t.down_closure(v))
        }
        TreeQuery::Meet(v, w) => {
            t.require(v)?;
            t.require(w)?;
            TreeAnswer::Vertex(t.meet(v, w))
        }
        TreeQuery::Level(v) => {
            t.require(v)?;
            TreeAnswer::Level(t.level(v))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::vset;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn chain_queries() {
        // r=0 -> a=1 -> b=2
        let t = Arborescence::from_raw(0, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(tree_query(&t, &TreeQuery::Leq(v(1), v(2))), Ok(TreeAnswer::Bool(true)));
        assert_eq!(tree_query(&t, &TreeQuery::Meet(v(1), v(2))), Ok(TreeAnswer::Vertex(v(1))));
        assert!(t.is_path());
    }

    #[test]
    fn star_queries() {
        let t = Arborescence::from_raw(0, &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(t.meet(v(1), v(2)), v(0));
        assert_eq!(tree_query(&t, &TreeQuery::Level(v(1))), Ok(TreeAnswer::Level(1)));
        assert!(!t.comparable(v(1), v(2)));
        assert_eq!(t.up_closure(v(0)), vset([0, 1, 2]));
        assert_eq!(t.down_closure(v(2)), vset([0, 2]));
        assert_eq!(
            tree_query(&t, &TreeQuery::Level(v(9))),
            Err(ArborError::VertexNotInTree(v(9)))
        );
    }

    #[test]
    fn malformed_trees_are_rejected() {
        assert!(Arborescence::from_raw(0, &[(0, 1), (2, 1)]).is_err());
        assert!(Arborescence::from_raw(0, &[(1, 0)]).is_err());
        // 1 <-> 2 cycle detached from the root
        assert!(Arborescence::from_raw(0, &[(1, 2), (2, 1)]).is_err());
        assert!(Arborescence::from_raw(0, &[(3, 4)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = Arborescence::from_raw(5, &[(5, 1), (1, 7), (5, 3)]).unwrap();
        let back = load_arborescence(&t.to_json()).unwrap();
        assert_eq!(t, back);
        let single = load_arborescence(r#"{"root":4,"edges":[]}"#).unwrap();
        assert_eq!(single.len(), 1);
    }

    /// Every tree on `0..n` rooted at 0: all parent vectors, keeping the valid ones.
    fn all_trees(n: u32) -> Vec<Arborescence> {
        let mut out = Vec::new();
        let slots = (n - 1) as usize;
        let total = (n as usize).pow(slots as u32);
        for code in 0..total {
            let mut c = code;
            let mut edges = Vec::new();
            for child in 1..n {
                let p = (c % n as usize) as u32;
                c /= n as usize;
                edges.push((p, child));
            }
            if let Ok(t) = Arborescence::from_raw(0, &edges) {
                out.push(t);
            }
        }
        out
    }

    #[test]
    fn down_closures_intersect_in_a_chain_ending_at_the_meet() {
        for n in 1..=7 {
            let trees = all_trees(n);
            assert_eq!(trees.len(), (n as usize).pow(n.saturating_sub(2)).max(1));
            for t in &trees {
                for a in t.vertices() {
                    for b in t.vertices() {
                        let common: VertexSet = t
                            .down_closure(a)
                            .intersection(&t.down_closure(b))
                            .copied()
                            .collect();
                        let m = t.meet(a, b);
                        assert_eq!(common, t.down_closure(m));
                        assert_eq!(common.iter().max_by_key(|x| t.level(**x)), Some(&m));
                    }
                }
            }
        }
    }
}
