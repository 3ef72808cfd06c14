//! Comb search and the incremental construction of a normal arborescence
//! containing a prescribed, well-ordered set of targets.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::arborescence::{is_normal, is_sensitive, Arborescence, LinearExtension};
use crate::digraph::{find_path, reverse, Digraph, DirectedPath, Edge, VertexId, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JungError {
    #[error("target {0} is not reachable from the root")]
    UnreachableTarget(VertexId),
    #[error("root {0} is not a vertex of the digraph")]
    RootMissing(VertexId),
    #[error("malformed targets document: {0}")]
    BadTargets(String),
}

/// Targets `u_0, u_1, ...` in the order they are attached.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WellOrderedTargets {
    sequence: Vec<VertexId>,
    blocks: Option<Vec<Vec<VertexId>>>,
}

impl WellOrderedTargets {
    pub fn new(sequence: Vec<VertexId>) -> Self {
        WellOrderedTargets {
            sequence,
            blocks: None,
        }
    }

    pub fn from_raw(sequence: &[u32]) -> Self {
        WellOrderedTargets::new(sequence.iter().map(|&v| VertexId(v)).collect())
    }

    /// Concatenates the blocks, each sorted by id, keeping first occurrences.
    pub fn from_blocks(blocks: Vec<Vec<VertexId>>) -> Self {
        let mut seen = VertexSet::new();
        let mut sequence = Vec::new();
        for block in &blocks {
            let mut b = block.clone();
            b.sort_unstable();
            sequence.extend(b.into_iter().filter(|v| seen.insert(*v)));
        }
        WellOrderedTargets {
            sequence,
            blocks: Some(blocks),
        }
    }

    pub fn sequence(&self) -> &[VertexId] {
        &self.sequence
    }

    pub fn blocks(&self) -> Option<&[Vec<VertexId>]> {
        self.blocks.as_deref()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn to_document(&self) -> TargetsDocument {
        let raw = |vs: &[VertexId]| vs.iter().map(|v| v.0).collect::<Vec<u32>>();
        TargetsDocument {
            order: Some(raw(&self.sequence)),
            blocks: self
                .blocks
                .as_ref()
                .map(|bs| bs.iter().map(|b| raw(b)).collect()),
        }
    }
}

/// Wire form: `{"order":[...],"blocks":[[...]...]?}`. Without `order` the
/// sequence is read off the blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetsDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<Vec<u32>>>,
}

impl From<TargetsDocument> for WellOrderedTargets {
    fn from(doc: TargetsDocument) -> Self {
        let ids = |vs: Vec<u32>| vs.into_iter().map(VertexId).collect::<Vec<_>>();
        let blocks = doc.blocks.map(|bs| bs.into_iter().map(ids).collect::<Vec<_>>());
        match (doc.order, blocks) {
            (Some(order), blocks) => WellOrderedTargets {
                sequence: ids(order),
                blocks,
            },
            (None, Some(blocks)) => WellOrderedTargets::from_blocks(blocks),
            (None, None) => WellOrderedTargets::default(),
        }
    }
}

pub fn load_targets(document: &str) -> Result<WellOrderedTargets, JungError> {
    let doc: TargetsDocument =
        serde_json::from_str(document).map_err(|e| JungError::BadTargets(e.to_string()))?;
    Ok(doc.into())
}

/// One attachment made by the builder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Attachment {
    pub target: VertexId,
    pub path: DirectedPath,
}

/// Step-wise construction state: a tree `T` rooted at `r` and an order on
/// `V(T)`.
#[derive(Debug, Clone)]
pub struct JungBuilder<'a> {
    d: &'a Digraph,
    root: VertexId,
    parent: BTreeMap<VertexId, VertexId>,
    in_tree: VertexSet,
    order: Vec<VertexId>,
    targets_so_far: Vec<VertexId>,
    attached_at: BTreeMap<VertexId, usize>,
    steps: usize,
}

impl<'a> JungBuilder<'a> {
    pub fn new(d: &'a Digraph, root: VertexId) -> Result<Self, JungError> {
        if !d.has_vertex(root) {
            return Err(JungError::RootMissing(root));
        }
        Ok(JungBuilder {
            d,
            root,
            parent: BTreeMap::new(),
            in_tree: VertexSet::from([root]),
            order: vec![root],
            targets_so_far: Vec::new(),
            attached_at: BTreeMap::from([(root, 0)]),
            steps: 0,
        })
    }

    /// Attaches `u` by a T–u path starting at the latest possible vertex of
    /// the current order. Returns `None` when `u` is already in the tree.
    pub fn step(&mut self, u: VertexId) -> Result<Option<Attachment>, JungError> {
        if !self.d.has_vertex(u) {
            return Err(JungError::UnreachableTarget(u));
        }
        self.targets_so_far.push(u);
        if self.in_tree.contains(&u) {
            return Ok(None);
        }
        // Outside vertices from which u is reachable without touching T.
        let mut feeds = VertexSet::from([u]);
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for y in self.d.in_neighbors(x) {
                if !self.in_tree.contains(&y) && feeds.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        let start = self
            .order
            .iter()
            .rev()
            .find(|&&x| self.d.out_neighbors(x).any(|y| feeds.contains(&y)))
            .copied()
            .ok_or(JungError::UnreachableTarget(u))?;
        let path = find_path(self.d, &VertexSet::from([start]), &VertexSet::from([u]), &self.in_tree)
            .expect("a start vertex has an out-neighbour feeding the target");
        self.steps += 1;
        let verts = path.vertices();
        for w in verts.windows(2) {
            self.parent.insert(w[1], w[0]);
            self.in_tree.insert(w[1]);
            self.attached_at.insert(w[1], self.steps);
        }
        let at = self.order.iter().position(|&x| x == start).unwrap();
        self.order.splice(at + 1..at + 1, verts[1..].iter().copied());
        Ok(Some(Attachment { target: u, path }))
    }

    pub fn tree(&self) -> Arborescence {
        Arborescence::from_parents(self.root, self.parent.clone())
            .expect("attached paths form an arborescence")
    }

    pub fn order(&self) -> LinearExtension {
        LinearExtension::new(self.order.clone()).expect("order lists each tree vertex once")
    }

    pub fn targets_so_far(&self) -> &[VertexId] {
        &self.targets_so_far
    }

    /// Step at which `v` entered the tree; the root has step 0.
    pub fn attached_at(&self, v: VertexId) -> Option<usize> {
        self.attached_at.get(&v).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JungOutcome {
    pub tree: Arborescence,
    pub order: LinearExtension,
    pub attachments: Vec<Attachment>,
}

/// Builds a normal arborescence rooted at `r` containing every target.
pub fn jung_build(
    d: &Digraph,
    r: VertexId,
    targets: &WellOrderedTargets,
) -> Result<JungOutcome, JungError> {
    let mut b = JungBuilder::new(d, r)?;
    let reach = d.reachable_from(&VertexSet::from([r]), &VertexSet::new());
    if let Some(&u) = targets.sequence().iter().find(|u| !reach.contains(u)) {
        return Err(JungError::UnreachableTarget(u));
    }
    let mut attachments = Vec::new();
    for &u in targets.sequence() {
        attachments.extend(b.step(u)?);
    }
    let tree = b.tree();
    let order = b.order();
    assert!(
        is_normal(d, &tree).expect("tree lies in d").is_normal(),
        "constructed arborescence must be normal"
    );
    assert!(
        is_sensitive(d, &tree, &order).expect("order extends the tree").is_sensitive(),
        "constructed order must be sensitive"
    );
    Ok(JungOutcome {
        tree,
        order,
        attachments,
    })
}

/// An arborescence of `reverse(d)`, read in `d` with every edge pointing
/// toward the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReverseArborescence {
    pub tree: Arborescence,
}

impl ReverseArborescence {
    pub fn root(&self) -> VertexId {
        self.tree.root()
    }

    /// Edges `(child, parent)` as they appear in the original digraph.
    pub fn edges(&self) -> Vec<Edge> {
        let mut e: Vec<Edge> = self.tree.edges().into_iter().map(|(p, c)| (c, p)).collect();
        e.sort_unstable();
        e
    }

    /// Normality in `d` means normality of the tree in `reverse(d)`.
    pub fn is_normal_in(&self, d: &Digraph) -> bool {
        is_normal(&reverse(d), &self.tree).is_ok_and(|n| n.is_normal())
    }
}

pub fn reverse_jung_build(
    d: &Digraph,
    r: VertexId,
    targets: &WellOrderedTargets,
) -> Result<ReverseArborescence, JungError> {
    let out = jung_build(&reverse(d), r, targets)?;
    Ok(ReverseArborescence { tree: out.tree })
}

/// A finite comb: a spine path and disjoint paths hanging off it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectedComb {
    pub spine: DirectedPath,
    pub paths: Vec<DirectedPath>,
}

impl DirectedComb {
    pub fn teeth(&self) -> Vec<VertexId> {
        self.paths.iter().map(|p| p.last()).collect()
    }

    /// Checks disjointness, attachment and tooth membership.
    pub fn is_valid(&self, d: &Digraph, u: &VertexSet) -> bool {
        let spine: VertexSet = self.spine.vertices().iter().copied().collect();
        if DirectedPath::new(d, self.spine.vertices().to_vec()).is_err() {
            return false;
        }
        let mut used = VertexSet::new();
        for p in &self.paths {
            if DirectedPath::new(d, p.vertices().to_vec()).is_err()
                || !spine.contains(&p.first())
                || p.vertices()[1..].iter().any(|v| spine.contains(v))
                || !u.contains(&p.last())
                || p.vertices().iter().any(|v| !used.insert(*v))
            {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CombSearch {
    Found(DirectedComb),
    NotFound,
}

/// Unit-capacity flow network for counting teeth on a fixed spine.
struct ToothFlow {
    cap: Vec<BTreeMap<usize, i32>>,
}

impl ToothFlow {
    fn new(n: usize) -> Self {
        ToothFlow {
            cap: vec![BTreeMap::new(); n],
        }
    }

    fn add(&mut self, a: usize, b: usize) {
        *self.cap[a].entry(b).or_insert(0) += 1;
        self.cap[b].entry(a).or_insert(0);
    }

    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut prev = vec![usize::MAX; self.cap.len()];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if x == t {
                break;
            }
            for (&y, &c) in &self.cap[x] {
                if c > 0 && prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if prev[t] == usize::MAX {
            return false;
        }
        let mut y = t;
        while y != s {
            let x = prev[y];
            *self.cap[x].get_mut(&y).unwrap() -= 1;
            *self.cap[y].get_mut(&x).unwrap() += 1;
            y = x;
        }
        true
    }
}

/// Up to `k` disjoint teeth for `spine`, or `None` if fewer exist.
fn teeth_for(d: &Digraph, u: &VertexSet, spine: &[VertexId], k: usize) -> Option<Vec<DirectedPath>> {
    let on_spine: VertexSet = spine.iter().copied().collect();
    let others: Vec<VertexId> = d.vertices().filter(|v| !on_spine.contains(v)).collect();
    let idx: BTreeMap<VertexId, usize> = others.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let m = others.len();
    // nodes: 0 source, 1 sink, spine 2.., then (in, out) pairs
    let spine_node = |i: usize| 2 + i;
    let in_node = |v: VertexId| 2 + spine.len() + 2 * idx[&v];
    let out_node = |v: VertexId| in_node(v) + 1;
    let (s, t) = (0, 1);
    let mut g = ToothFlow::new(2 + spine.len() + 2 * m);
    for (i, &x) in spine.iter().enumerate() {
        g.add(s, spine_node(i));
        if u.contains(&x) {
            g.add(spine_node(i), t);
        }
        for y in d.out_neighbors(x) {
            if !on_spine.contains(&y) {
                g.add(spine_node(i), in_node(y));
            }
        }
    }
    for &x in &others {
        g.add(in_node(x), out_node(x));
        if u.contains(&x) {
            g.add(out_node(x), t);
        }
        for y in d.out_neighbors(x) {
            if !on_spine.contains(&y) {
                g.add(out_node(x), in_node(y));
            }
        }
    }
    let mut flow = 0;
    while flow < k && g.augment(s, t) {
        flow += 1;
    }
    if flow < k {
        return None;
    }
    let used = |g: &ToothFlow, a: usize, b: usize| g.cap[b].get(&a).is_some_and(|&c| c > 0);
    let mut paths = Vec::new();
    for (i, &x) in spine.iter().enumerate() {
        if !used(&g, s, spine_node(i)) {
            continue;
        }
        let mut path = vec![x];
        let mut node = spine_node(i);
        loop {
            if used(&g, node, t) {
                break;
            }
            let next = others
                .iter()
                .copied()
                .find(|&y| used(&g, node, in_node(y)))
                .expect("flow leaving a node continues to a vertex or the sink");
            path.push(next);
            node = out_node(next);
        }
        paths.push(DirectedPath::new(d, path).expect("flow paths follow edges"));
    }
    Some(paths)
}

/// Exhaustive search over spine paths for a comb with `k` teeth in `u`.
pub fn comb_search(d: &Digraph, u: &VertexSet, k: usize) -> CombSearch {
    let usable = u.iter().filter(|v| d.has_vertex(**v)).count();
    if k == 0 || k > usable {
        return CombSearch::NotFound;
    }
    for start in d.vertices() {
        let mut spine = vec![start];
        let mut on = VertexSet::from([start]);
        let mut stack: Vec<Vec<VertexId>> = vec![d.out_neighbors(start).rev().collect()];
        loop {
            if let Some(paths) = teeth_for(d, u, &spine, k) {
                return CombSearch::Found(DirectedComb {
                    spine: DirectedPath::new(d, spine).expect("spine follows edges"),
                    paths,
                });
            }
            // advance to the next spine in depth-first order
            loop {
                let Some(top) = stack.last_mut() else { break };
                match top.pop() {
                    Some(y) if !on.contains(&y) => {
                        spine.push(y);
                        on.insert(y);
                        stack.push(d.out_neighbors(y).rev().collect());
                        break;
                    }
                    Some(_) => continue,
                    None => {
                        stack.pop();
                        if let Some(x) = spine.pop() {
                            on.remove(&x);
                        }
                    }
                }
            }
            if stack.is_empty() {
                break;
            }
        }
    }
    CombSearch::NotFound
}
