//! Finite simple digraphs.
//!
//! Loops and parallel edges are rejected at construction, inversely directed
//! pairs `(v, w)` and `(w, v)` are allowed. Every iteration order exposed here
//! (vertices, adjacency, component labels) is ascending by [`VertexId`], which
//! is what makes the certificates produced elsewhere in the crate
//! reproducible.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Opaque vertex identifier. The numeric order is the canonical tie-break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

pub type VertexSet = BTreeSet<VertexId>;

/// An ordered pair `(tail, head)`.
pub type Edge = (VertexId, VertexId);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("loop edge ({}, {}) is not allowed", .0 .0, .0 .1)]
    LoopEdge(Edge),
    #[error("duplicate edge ({}, {})", .0 .0, .0 .1)]
    DuplicateEdge(Edge),
    #[error("edge ({}, {}) mentions a vertex that is not declared", .0 .0, .0 .1)]
    UnknownVertex(Edge),
    #[error("vertex {0} is declared twice")]
    DuplicateVertex(VertexId),
    #[error("name key {0:?} is not a declared vertex id")]
    BadName(String),
    #[error("malformed digraph document: {0}")]
    Parse(String),
}

/// A finite digraph without loops and without parallel edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Digraph {
    out: BTreeMap<VertexId, BTreeSet<VertexId>>,
    inn: BTreeMap<VertexId, BTreeSet<VertexId>>,
    names: BTreeMap<VertexId, String>,
}

impl Digraph {
    /// Builds a validated digraph. Duplicates are errors, never deduplicated.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = VertexId>,
        E: IntoIterator<Item = Edge>,
    {
        let mut d = Digraph::default();
        for v in vertices {
            if d.out.insert(v, BTreeSet::new()).is_some() {
                return Err(GraphError::DuplicateVertex(v));
            }
            d.inn.insert(v, BTreeSet::new());
        }
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::LoopEdge((a, b)));
            }
            if !d.out.contains_key(&a) || !d.out.contains_key(&b) {
                return Err(GraphError::UnknownVertex((a, b)));
            }
            if !d.out.get_mut(&a).expect("checked").insert(b) {
                return Err(GraphError::DuplicateEdge((a, b)));
            }
            d.inn.get_mut(&b).expect("checked").insert(a);
        }
        Ok(d)
    }

    /// Convenience constructor over raw integers.
    pub fn from_raw(vertices: &[u32], edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        Digraph::new(
            vertices.iter().copied().map(VertexId),
            edges.iter().map(|&(a, b)| (VertexId(a), VertexId(b))),
        )
    }

    /// Vertices `0..n` with the given edges.
    pub fn on_range(n: u32, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        let vs: Vec<u32> = (0..n).collect();
        Digraph::from_raw(&vs, edges)
    }

    /// The complete symmetric digraph on `0..n`.
    pub fn complete_symmetric(n: u32) -> Self {
        let edges: Vec<(u32, u32)> = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        Digraph::on_range(n, &edges).expect("complete digraph is simple")
    }

    pub fn with_names(mut self, names: BTreeMap<VertexId, String>) -> Result<Self, GraphError> {
        for v in names.keys() {
            if !self.has_vertex(*v) {
                return Err(GraphError::BadName(v.to_string()));
            }
        }
        self.names = names;
        Ok(self)
    }

    pub fn set_name(&mut self, v: VertexId, name: impl Into<String>) {
        if self.has_vertex(v) {
            self.names.insert(v, name.into());
        }
    }

    pub fn names(&self) -> &BTreeMap<VertexId, String> {
        &self.names
    }

    pub fn name(&self, v: VertexId) -> Option<&str> {
        self.names.get(&v).map(String::as_str)
    }

    /// The stored name of `v`, or its numeric id.
    pub fn label(&self, v: VertexId) -> String {
        self.name(v).map_or_else(|| v.to_string(), str::to_owned)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.out.keys().copied()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.out.keys().copied().collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.values().map(BTreeSet::len).sum()
    }

    /// All edges, sorted by tail then head.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.out
            .iter()
            .flat_map(|(&a, hs)| hs.iter().map(move |&b| (a, b)))
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.out.contains_key(&v)
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.out.get(&a).is_some_and(|hs| hs.contains(&b))
    }

    /// Out-neighbours in ascending order; empty for unknown vertices.
    pub fn out_neighbors(&self, v: VertexId) -> impl DoubleEndedIterator<Item = VertexId> + '_ {
        self.out.get(&v).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn in_neighbors(&self, v: VertexId) -> impl DoubleEndedIterator<Item = VertexId> + '_ {
        self.inn.get(&v).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.inn.get(&v).map_or(0, BTreeSet::len)
    }

    /// The subdigraph induced on `keep` (vertices outside `self` are ignored).
    pub fn induced(&self, keep: &VertexSet) -> Digraph {
        let mut d = Digraph::default();
        for &v in keep {
            if self.has_vertex(v) {
                d.out.insert(v, BTreeSet::new());
                d.inn.insert(v, BTreeSet::new());
            }
        }
        for (&a, hs) in &self.out {
            if !d.has_vertex(a) {
                continue;
            }
            for &b in hs {
                if d.has_vertex(b) {
                    d.out.get_mut(&a).expect("present").insert(b);
                    d.inn.get_mut(&b).expect("present").insert(a);
                }
            }
        }
        d.names = self
            .names
            .iter()
            .filter(|(v, _)| d.has_vertex(**v))
            .map(|(v, n)| (*v, n.clone()))
            .collect();
        d
    }

    /// `self - x`.
    pub fn without(&self, x: &VertexSet) -> Digraph {
        let keep: VertexSet = self.vertices().filter(|v| !x.contains(v)).collect();
        self.induced(&keep)
    }

    /// Adds edges with set-union semantics. Loops and edges touching unknown
    /// vertices are rejected.
    pub fn union_edges<I>(&self, edges: I) -> Result<Digraph, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut d = self.clone();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::LoopEdge((a, b)));
            }
            if !d.has_vertex(a) || !d.has_vertex(b) {
                return Err(GraphError::UnknownVertex((a, b)));
            }
            d.out.get_mut(&a).expect("present").insert(b);
            d.inn.get_mut(&b).expect("present").insert(a);
        }
        Ok(d)
    }

    /// Vertices reachable from `sources` without entering `avoid`.
    pub fn reachable_from(&self, sources: &VertexSet, avoid: &VertexSet) -> VertexSet {
        let mut seen: VertexSet = sources
            .iter()
            .copied()
            .filter(|v| self.has_vertex(*v) && !avoid.contains(v))
            .collect();
        let mut queue: VecDeque<VertexId> = seen.iter().copied().collect();
        while let Some(v) = queue.pop_front() {
            for w in self.out_neighbors(v) {
                if !avoid.contains(&w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn can_reach(&self, from: VertexId, to: VertexId) -> bool {
        self.reachable_from(&[from].into(), &VertexSet::new()).contains(&to)
    }

    /// Some directed cycle, found by a depth-first search in id order.
    pub fn find_cycle(&self) -> Option<Vec<VertexId>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Open,
            Done,
        }
        let mut mark: BTreeMap<VertexId, Mark> = self.vertices().map(|v| (v, Mark::New)).collect();
        for start in self.vertices() {
            if mark[&start] != Mark::New {
                continue;
            }
            let mut stack: Vec<(VertexId, Vec<VertexId>)> = Vec::new();
            mark.insert(start, Mark::Open);
            stack.push((start, self.out_neighbors(start).rev().collect()));
            while let Some((v, pending)) = stack.last_mut() {
                let v = *v;
                match pending.pop() {
                    Some(w) => match mark[&w] {
                        Mark::New => {
                            mark.insert(w, Mark::Open);
                            stack.push((w, self.out_neighbors(w).rev().collect()));
                        }
                        Mark::Open => {
                            let pos = stack.iter().position(|(u, _)| *u == w).expect("open on stack");
                            return Some(stack[pos..].iter().map(|(u, _)| *u).collect());
                        }
                        Mark::Done => {}
                    },
                    None => {
                        mark.insert(v, Mark::Done);
                        stack.pop();
                    }
                }
            }
        }
        None
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    pub fn to_document(&self) -> DigraphDocument {
        DigraphDocument {
            vertices: self.vertices().map(|v| v.0).collect(),
            edges: self.edges().map(|(a, b)| [a.0, b.0]).collect(),
            names: if self.names.is_empty() {
                None
            } else {
                Some(self.names.iter().map(|(v, n)| (v.0.to_string(), n.clone())).collect())
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("digraph document serializes")
    }
}

/// Wire form: `{"vertices":[int...],"edges":[[int,int]...],"names":{"int":"string"}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigraphDocument {
    pub vertices: Vec<u32>,
    pub edges: Vec<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<BTreeMap<String, String>>,
}

impl TryFrom<DigraphDocument> for Digraph {
    type Error = GraphError;

    fn try_from(doc: DigraphDocument) -> Result<Self, GraphError> {
        let d = Digraph::new(
            doc.vertices.iter().copied().map(VertexId),
            doc.edges.iter().map(|[a, b]| (VertexId(*a), VertexId(*b))),
        )?;
        let mut names = BTreeMap::new();
        for (key, name) in doc.names.unwrap_or_default() {
            let id: u32 = key.trim().parse().map_err(|_| GraphError::BadName(key.clone()))?;
            names.insert(VertexId(id), name);
        }
        d.with_names(names)
    }
}

impl Serialize for Digraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_document().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Digraph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let doc = DigraphDocument::deserialize(de)?;
        Digraph::try_from(doc).map_err(serde::de::Error::custom)
    }
}

/// Parses and validates a digraph document.
pub fn load_digraph(document: &str) -> Result<Digraph, GraphError> {
    let doc: DigraphDocument =
        serde_json::from_str(document).map_err(|e| GraphError::Parse(e.to_string()))?;
    Digraph::try_from(doc)
}

/// The digraph on the same vertices with every edge reversed.
pub fn reverse(d: &Digraph) -> Digraph {
    Digraph {
        out: d.inn.clone(),
        inn: d.out.clone(),
        names: d.names.clone(),
    }
}

/// A nonempty sequence of distinct vertices, consecutive ones joined by edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DirectedPath(Vec<VertexId>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("a path needs at least one vertex")]
    Empty,
    #[error("vertex {0} repeats on the path")]
    Repeated(VertexId),
    #[error("({}, {}) is not an edge", .0 .0, .0 .1)]
    MissingEdge(Edge),
}

impl DirectedPath {
    pub fn new(d: &Digraph, vertices: Vec<VertexId>) -> Result<Self, PathError> {
        if vertices.is_empty() {
            return Err(PathError::Empty);
        }
        let mut seen = VertexSet::new();
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(PathError::Repeated(v));
            }
        }
        for w in vertices.windows(2) {
            if !d.has_edge(w[0], w[1]) {
                return Err(PathError::MissingEdge((w[0], w[1])));
            }
        }
        Ok(DirectedPath(vertices))
    }

    /// Callers guarantee the path conditions.
    pub(crate) fn from_vec_unchecked(vertices: Vec<VertexId>) -> Self {
        debug_assert!(!vertices.is_empty());
        DirectedPath(vertices)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn first(&self) -> VertexId {
        self.0[0]
    }

    pub fn last(&self) -> VertexId {
        *self.0.last().expect("nonempty")
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_trivial(&self) -> bool {
        self.0.len() < 2
    }

    pub fn interior(&self) -> &[VertexId] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.0
    }
}

/// Strong components of `D - X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccPartition {
    component_of: BTreeMap<VertexId, usize>,
    components: Vec<Vec<VertexId>>,
    deleted: VertexSet,
}

impl SccPartition {
    pub fn component_of(&self, v: VertexId) -> Option<usize> {
        self.component_of.get(&v).copied()
    }

    /// Components indexed by label; labels follow the smallest member id.
    pub fn components(&self) -> &[Vec<VertexId>] {
        &self.components
    }

    pub fn component(&self, label: usize) -> &[VertexId] {
        &self.components[label]
    }

    pub fn deleted(&self) -> &VertexSet {
        &self.deleted
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn same(&self, v: VertexId, w: VertexId) -> bool {
        matches!((self.component_of(v), self.component_of(w)), (Some(a), Some(b)) if a == b)
    }
}

/// Strong components of `d - x`, labelled in ascending order of their
/// smallest vertex. Iterative Tarjan.
pub fn strong_components(d: &Digraph, x: &VertexSet) -> SccPartition {
    let verts: Vec<VertexId> = d.vertices().filter(|v| !x.contains(v)).collect();
    let n = verts.len();
    let pos = |v: VertexId| verts.binary_search(&v).ok();
    let adj: Vec<Vec<usize>> = verts
        .iter()
        .map(|&v| d.out_neighbors(v).filter_map(pos).collect())
        .collect();

    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut raw: Vec<Vec<usize>> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut edge)) = call.last_mut() {
            if *edge < adj[v].len() {
                let w = adj[v][*edge];
                *edge += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    raw.push(comp);
                }
            }
        }
    }

    let mut components: Vec<Vec<VertexId>> = raw
        .into_iter()
        .map(|c| {
            let mut vs: Vec<VertexId> = c.into_iter().map(|i| verts[i]).collect();
            vs.sort_unstable();
            vs
        })
        .collect();
    components.sort_unstable_by_key(|c| c[0]);
    let mut component_of = BTreeMap::new();
    for (label, comp) in components.iter().enumerate() {
        for &v in comp {
            component_of.insert(v, label);
        }
    }
    SccPartition {
        component_of,
        components,
        deleted: x.clone(),
    }
}

/// Shortest `sources`–`targets` path whose interior avoids
/// `forbidden_interior`, `sources` and `targets`; ties go to the
/// lexicographically smallest id sequence.
///
/// The path meets `sources` only in its first vertex and `targets` only in its
/// last. A vertex in both sets yields the trivial path on the smallest such
/// vertex.
pub fn find_path(
    d: &Digraph,
    sources: &VertexSet,
    targets: &VertexSet,
    forbidden_interior: &VertexSet,
) -> Option<DirectedPath> {
    if let Some(&v) = sources.iter().find(|v| targets.contains(v) && d.has_vertex(**v)) {
        return Some(DirectedPath::from_vec_unchecked(vec![v]));
    }
    let interior_ok =
        |v: &VertexId| !forbidden_interior.contains(v) && !sources.contains(v) && !targets.contains(v);

    // Distance to the target set, over vertices allowed as interior.
    let mut dist: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for &t in targets {
        if d.has_vertex(t) {
            dist.insert(t, 0);
            queue.push_back(t);
        }
    }
    let mut best: Option<(usize, VertexId)> = None;
    while let Some(x) = queue.pop_front() {
        let dx = dist[&x];
        if best.is_some_and(|(b, _)| dx + 1 > b) {
            break;
        }
        for y in d.in_neighbors(x) {
            if sources.contains(&y) {
                let cand = (dx + 1, y);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            } else if interior_ok(&y) && !dist.contains_key(&y) {
                dist.insert(y, dx + 1);
                queue.push_back(y);
            }
        }
    }
    let (len, start) = best?;
    let mut path = vec![start];
    let mut current = start;
    let mut remaining = len;
    while remaining > 0 {
        let next = d
            .out_neighbors(current)
            .find(|x| {
                if remaining == 1 {
                    targets.contains(x)
                } else {
                    interior_ok(x) && dist.get(x) == Some(&(remaining - 1))
                }
            })
            .expect("distance labels admit a successor");
        path.push(next);
        current = next;
        remaining -= 1;
    }
    Some(DirectedPath::from_vec_unchecked(path))
}

/// Vertex set from raw integers.
pub fn vset<I: IntoIterator<Item = u32>>(ids: I) -> VertexSet {
    ids.into_iter().map(VertexId).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn smallest_valid_document_loads() {
        let d = load_digraph(r#"{"vertices":[0,1],"edges":[[0,1]]}"#).unwrap();
        assert_eq!(d.vertex_count(), 2);
        assert_eq!(d.edge_count(), 1);
    }

    #[test]
    fn loop_edges_are_rejected() {
        let err = load_digraph(r#"{"vertices":[0],"edges":[[0,0]]}"#).unwrap_err();
        assert_eq!(err, GraphError::LoopEdge((v(0), v(0))));
    }

    #[test]
    fn inverse_pairs_are_allowed() {
        let d = load_digraph(r#"{"vertices":[0,1],"edges":[[0,1],[1,0]]}"#).unwrap();
        assert_eq!(d.edge_count(), 2);
    }

    #[test]
    fn duplicates_and_unknowns_name_the_edge() {
        let err = load_digraph(r#"{"vertices":[0,1],"edges":[[0,1],[0,1]]}"#).unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge((v(0), v(1))));
        let err = load_digraph(r#"{"vertices":[0,1],"edges":[[0,7]]}"#).unwrap_err();
        assert_eq!(err, GraphError::UnknownVertex((v(0), v(7))));
        let err = load_digraph(r#"{"vertices":[0,0],"edges":[]}"#).unwrap_err();
        assert_eq!(err, GraphError::DuplicateVertex(v(0)));
    }

    #[test]
    fn names_round_trip() {
        let doc = r#"{"vertices":[3,5],"edges":[[5,3]],"names":{"3":"r","5":"a"}}"#;
        let d = load_digraph(doc).unwrap();
        assert_eq!(d.label(v(3)), "r");
        let again = load_digraph(&d.to_json()).unwrap();
        assert_eq!(d, again);
        assert!(matches!(
            load_digraph(r#"{"vertices":[0],"edges":[],"names":{"9":"x"}}"#),
            Err(GraphError::BadName(_))
        ));
    }

    #[test]
    fn two_cycle_is_one_component() {
        let d = Digraph::on_range(2, &[(0, 1), (1, 0)]).unwrap();
        let p = strong_components(&d, &VertexSet::new());
        assert_eq!(p.components(), &[vec![v(0), v(1)]]);
    }

    #[test]
    fn one_way_edge_gives_singletons() {
        let d = Digraph::on_range(2, &[(0, 1)]).unwrap();
        let p = strong_components(&d, &VertexSet::new());
        assert_eq!(p.components(), &[vec![v(0)], vec![v(1)]]);
    }

    #[test]
    fn deleting_the_middle_of_a_complete_triangle() {
        let d = Digraph::complete_symmetric(3);
        let p = strong_components(&d, &vset([1]));
        assert_eq!(p.components(), &[vec![v(0), v(2)]]);
        assert_eq!(p.component_of(v(1)), None);
    }

    #[test]
    fn reverse_is_an_involution_with_symmetric_fixed_points() {
        let d = Digraph::on_range(2, &[(0, 1)]).unwrap();
        let r = reverse(&d);
        assert!(r.has_edge(v(1), v(0)) && !r.has_edge(v(0), v(1)));
        assert_eq!(reverse(&r), d);
        let k = Digraph::complete_symmetric(4);
        assert_eq!(reverse(&k), k);
    }

    #[test]
    fn find_path_basics() {
        let d = Digraph::on_range(3, &[(0, 1), (1, 2)]).unwrap();
        let p = find_path(&d, &vset([0]), &vset([2]), &VertexSet::new()).unwrap();
        assert_eq!(p.vertices(), &[v(0), v(1), v(2)]);
        assert!(find_path(&d, &vset([0]), &vset([2]), &vset([1])).is_none());
    }

    #[test]
    fn find_path_prefers_the_shortest_route() {
        let d = Digraph::on_range(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let p = find_path(&d, &vset([0]), &vset([2]), &VertexSet::new()).unwrap();
        assert_eq!(p.vertices(), &[v(0), v(2)]);
    }

    #[test]
    fn find_path_breaks_ties_lexicographically() {
        // 0 -> {3, 1} -> 2; both length 2, the route via 1 wins.
        let d = Digraph::on_range(4, &[(0, 3), (0, 1), (3, 2), (1, 2)]).unwrap();
        let p = find_path(&d, &vset([0]), &vset([2]), &VertexSet::new()).unwrap();
        assert_eq!(p.vertices(), &[v(0), v(1), v(2)]);
        // smaller source wins at equal length
        let d = Digraph::on_range(4, &[(3, 2), (1, 2)]).unwrap();
        let p = find_path(&d, &vset([3, 1]), &vset([2]), &VertexSet::new()).unwrap();
        assert_eq!(p.vertices(), &[v(1), v(2)]);
    }

    #[test]
    fn find_path_meets_sources_and_targets_only_at_the_ends() {
        // 0 -> 1 -> 2 where 1 is also a source: the path must start at 1.
        let d = Digraph::on_range(3, &[(0, 1), (1, 2)]).unwrap();
        let p = find_path(&d, &vset([0, 1]), &vset([2]), &VertexSet::new()).unwrap();
        assert_eq!(p.vertices(), &[v(1), v(2)]);
        // 0 -> 1 -> 2 where 1 is also a target: stops at 1.
        let p = find_path(&d, &vset([0]), &vset([1, 2]), &VertexSet::new()).unwrap();
        assert_eq!(p.vertices(), &[v(0), v(1)]);
    }

    #[test]
    fn find_cycle_reports_a_real_cycle() {
        let d = Digraph::on_range(4, &[(0, 1), (1, 2), (2, 3), (3, 1)]).unwrap();
        let c = d.find_cycle().unwrap();
        assert_eq!(c, vec![v(1), v(2), v(3)]);
        assert!(Digraph::on_range(3, &[(0, 1), (1, 2), (0, 2)]).unwrap().is_acyclic());
    }
}
