use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::{Arborescence, ArborError};
use crate::digraph::{find_path, Digraph, DirectedPath, Edge, VertexId, VertexSet};

/// Pairs `(a, b)` of distinct tree vertices joined by a T-path from `a` to
/// `b`: a nontrivial path meeting the tree exactly in its endpoints.
pub fn tpath_endpoints(d: &Digraph, t: &Arborescence) -> BTreeSet<Edge> {
    let mut out = BTreeSet::new();
    for a in t.vertices() {
        let mut seen = VertexSet::new();
        let mut queue: VecDeque<VertexId> = VecDeque::new();
        for x in d.out_neighbors(a) {
            if t.contains(x) {
                out.insert((a, x));
            } else if seen.insert(x) {
                queue.push_back(x);
            }
        }
        while let Some(x) = queue.pop_front() {
            for y in d.out_neighbors(x) {
                if t.contains(y) {
                    if y != a {
                        out.insert((a, y));
                    }
                } else if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }
    out
}

/// Incomparable pairs `(v, w)` with a T-path from `⌈v⌉` to `⌈w⌉`.
fn added_pairs(t: &Arborescence, endpoints: &BTreeSet<Edge>) -> BTreeSet<Edge> {
    let mut added = BTreeSet::new();
    for &(a, b) in endpoints {
        if t.comparable(a, b) || added.contains(&(a, b)) {
            continue;
        }
        let m = t.meet(a, b);
        let chain = |mut x: VertexId| {
            let mut c = Vec::new();
            while x != m {
                c.push(x);
                x = t.parent(x).expect("below the meet there is a parent");
            }
            c
        };
        let (ca, cb) = (chain(a), chain(b));
        for &v in &ca {
            for &w in &cb {
                added.insert((v, w));
            }
        }
    }
    added
}

/// The tree plus one edge `vw` per incomparable pair with a T-path from
/// `⌈v⌉` to `⌈w⌉`.
#[derive(Debug, Clone)]
pub struct NormalAssistant {
    base: Arborescence,
    added: BTreeSet<Edge>,
    witness: BTreeMap<Edge, DirectedPath>,
    h: Digraph,
}

impl NormalAssistant {
    fn build(d: &Digraph, t: &Arborescence, with_witnesses: bool) -> Result<Self, ArborError> {
        t.check_in_host(d)?;
        let endpoints = tpath_endpoints(d, t);
        let added = added_pairs(t, &endpoints);
        let mut witness = BTreeMap::new();
        if with_witnesses {
            let tree = t.vertex_set();
            let mut ups: HashMap<VertexId, VertexSet> = HashMap::new();
            for &(v, w) in &added {
                for x in [v, w] {
                    ups.entry(x).or_insert_with(|| t.up_closure(x));
                }
                let p = find_path(d, &ups[&v], &ups[&w], &tree)
                    .expect("an added pair always has a witnessing T-path");
                witness.insert((v, w), p);
            }
        }
        let h = Digraph::new(t.vertices(), t.edges().into_iter().chain(added.iter().copied()))
            .expect("assistant edges join distinct tree vertices");
        Ok(NormalAssistant {
            base: t.clone(),
            added,
            witness,
            h,
        })
    }

    pub(crate) fn build_plain(d: &Digraph, t: &Arborescence) -> Result<Self, ArborError> {
        NormalAssistant::build(d, t, false)
    }

    pub fn base(&self) -> &Arborescence {
        &self.base
    }

    /// Added pairs, sorted.
    pub fn added(&self) -> &BTreeSet<Edge> {
        &self.added
    }

    /// Shortest id-lexicographic T-path witnessing an added pair.
    pub fn witness(&self, v: VertexId, w: VertexId) -> Option<&DirectedPath> {
        self.witness.get(&(v, w))
    }

    pub fn witnesses(&self) -> &BTreeMap<Edge, DirectedPath> {
        &self.witness
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.h.has_edge(a, b)
    }

    /// `H` as a digraph on `V(T)`.
    pub fn digraph(&self) -> &Digraph {
        &self.h
    }

    /// The normal order: `v ⊴ w` iff `w` is reachable from `v` in `H`.
    pub fn precedes(&self, v: VertexId, w: VertexId) -> bool {
        self.h.can_reach(v, w)
    }

    pub fn is_acyclic(&self) -> bool {
        self.h.is_acyclic()
    }

    pub fn normality(&self) -> Normality {
        match self.h.find_cycle() {
            None => Normality::Normal,
            Some(c) => Normality::NotNormal(
                normalize_cycle(self, &c).expect("a cycle found in H is a cycle of H"),
            ),
        }
    }
}

pub fn normal_assistant(d: &Digraph, t: &Arborescence) -> Result<NormalAssistant, ArborError> {
    NormalAssistant::build(d, t, true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleCertificate {
    #[serde(rename = "cycle")]
    pub vertices: Vec<VertexId>,
    pub normalized: bool,
}

impl CycleCertificate {
    /// Consecutive pairs, closing the cycle.
    pub fn edges(&self) -> Vec<Edge> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| (self.vertices[i], self.vertices[(i + 1) % n]))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "certificate", rename_all = "snake_case")]
pub enum Normality {
    Normal,
    NotNormal(CycleCertificate),
}

impl Normality {
    pub fn is_normal(&self) -> bool {
        matches!(self, Normality::Normal)
    }
}

/// Normality without witness paths.
pub fn is_normal(d: &Digraph, t: &Arborescence) -> Result<Normality, ArborError> {
    Ok(NormalAssistant::build(d, t, false)?.normality())
}

/// The assistant with witnesses together with its verdict.
pub fn check_normal(
    d: &Digraph,
    t: &Arborescence,
) -> Result<(NormalAssistant, Normality), ArborError> {
    let h = normal_assistant(d, t)?;
    let verdict = h.normality();
    Ok((h, verdict))
}

fn rotate_to_min(mut c: Vec<VertexId>) -> Vec<VertexId> {
    if let Some(i) = c.iter().enumerate().min_by_key(|(_, v)| **v).map(|(i, _)| i) {
        c.rotate_left(i);
    }
    c
}

/// Rewrites a cycle of `H` into one whose consecutive vertices are pairwise
/// incomparable.
pub fn normalize_cycle(
    h: &NormalAssistant,
    cycle: &[VertexId],
) -> Result<CycleCertificate, ArborError> {
    let t = &h.base;
    if cycle.len() < 2 {
        return Err(ArborError::NotACycle("fewer than two vertices".into()));
    }
    let distinct: VertexSet = cycle.iter().copied().collect();
    if distinct.len() != cycle.len() {
        return Err(ArborError::NotACycle("repeated vertex".into()));
    }
    let n = cycle.len();
    for i in 0..n {
        let (a, b) = (cycle[i], cycle[(i + 1) % n]);
        if !h.has_edge(a, b) {
            return Err(ArborError::NotACycle(format!("({a}, {b}) is not an edge of H")));
        }
    }
    let incomparable_cycle =
        |c: &[VertexId]| (0..c.len()).all(|i| !t.comparable(c[i], c[(i + 1) % c.len()]));
    if incomparable_cycle(cycle) {
        return Ok(CycleCertificate {
            vertices: cycle.to_vec(),
            normalized: true,
        });
    }

    // Shortcut u v w -> u w where u is the parent of v.
    let mut c = cycle.to_vec();
    loop {
        let n = c.len();
        let hit = (0..n).find(|&i| {
            let (u, v, w) = (c[i], c[(i + 1) % n], c[(i + 2) % n]);
            t.is_tree_edge(u, v) && !t.comparable(v, w) && !t.comparable(u, w)
        });
        match hit {
            Some(i) => {
                c.remove((i + 1) % n);
            }
            None => break,
        }
    }

    if !incomparable_cycle(&c) {
        c = reduce_segments(t, &c);
    }
    let c = shortest_added_cycle(h, &c);
    debug_assert!(incomparable_cycle(&c));
    Ok(CycleCertificate {
        vertices: c,
        normalized: true,
    })
}

/// Views the cycle as added edges `(a_i, b_i)` joined by tree paths
/// `b_i <= a_{i+1}`, drops segments until consecutive heads are incomparable,
/// and returns a simple cycle through the remaining heads.
fn reduce_segments(t: &Arborescence, c: &[VertexId]) -> Vec<VertexId> {
    let n = c.len();
    let mut heads: Vec<VertexId> = (0..n)
        .filter(|&i| !t.is_tree_edge(c[i], c[(i + 1) % n]))
        .map(|i| c[(i + 1) % n])
        .collect();
    loop {
        let m = heads.len();
        debug_assert!(m >= 2);
        match (0..m).find(|&i| t.comparable(heads[i], heads[(i + 1) % m])) {
            Some(i) => {
                heads.remove((i + 1) % m);
            }
            None => break,
        }
    }
    let mut pos: HashMap<VertexId, usize> = HashMap::new();
    for (j, &b) in heads.iter().enumerate() {
        if let Some(&i) = pos.get(&b) {
            return heads[i..j].to_vec();
        }
        pos.insert(b, j);
    }
    heads
}

/// Shortest cycle of added edges on the vertices of `c`, rotated to start at
/// its smallest vertex; ties go to the lexicographically smallest sequence.
fn shortest_added_cycle(h: &NormalAssistant, c: &[VertexId]) -> Vec<VertexId> {
    let vs: VertexSet = c.iter().copied().collect();
    let vs_ref = &vs;
    let succ = |x: VertexId| {
        h.h.out_neighbors(x)
            .filter(move |y| vs_ref.contains(y) && h.added.contains(&(x, *y)))
    };
    let mut best: Option<Vec<VertexId>> = None;
    for &s in &vs {
        // BFS from s back to s.
        let mut prev: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        let mut queue = VecDeque::from([s]);
        let mut closing = None;
        'bfs: while let Some(x) = queue.pop_front() {
            for y in succ(x) {
                if y == s {
                    closing = Some(x);
                    break 'bfs;
                }
                if let std::collections::btree_map::Entry::Vacant(e) = prev.entry(y) {
                    e.insert(x);
                    queue.push_back(y);
                }
            }
        }
        if let Some(mut x) = closing {
            let mut cyc = vec![x];
            while x != s {
                x = prev[&x];
                cyc.push(x);
            }
            cyc.reverse();
            let cyc = rotate_to_min(cyc);
            let better = match &best {
                None => true,
                Some(b) => (cyc.len(), &cyc) < (b.len(), b),
            };
            if better {
                best = Some(cyc);
            }
        }
    }
    best.expect("the input cycle consists of added edges")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    // r=0, a=1, b=2
    fn star() -> Arborescence {
        Arborescence::from_raw(0, &[(0, 1), (0, 2)]).unwrap()
    }

    #[test]
    fn single_cross_edge() {
        let d = Digraph::on_range(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let h = normal_assistant(&d, &star()).unwrap();
        assert_eq!(h.added(), &BTreeSet::from([(v(1), v(2))]));
        assert_eq!(h.witness(v(1), v(2)).unwrap().vertices(), &[v(1), v(2)]);
        assert_eq!(is_normal(&d, &star()), Ok(Normality::Normal));
    }

    #[test]
    fn two_cycle_between_siblings() {
        let d = Digraph::on_range(3, &[(0, 1), (0, 2), (1, 2), (2, 1)]).unwrap();
        let h = normal_assistant(&d, &star()).unwrap();
        assert_eq!(h.added().len(), 2);
        match h.normality() {
            Normality::NotNormal(c) => {
                assert_eq!(c.vertices, vec![v(1), v(2)]);
                assert!(c.normalized);
            }
            Normality::Normal => panic!("expected a cycle"),
        }
    }

    #[test]
    fn hamiltonian_path_has_no_added_edges() {
        let d = Digraph::complete_symmetric(4);
        let t = Arborescence::from_raw(0, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(normal_assistant(&d, &t).unwrap().added().is_empty());
    }

    #[test]
    fn missing_tree_edge_is_reported() {
        let d = Digraph::on_range(3, &[(0, 1)]).unwrap();
        assert_eq!(
            normal_assistant(&d, &star()).unwrap_err(),
            ArborError::EdgeMissingFromHost((v(0), v(2)))
        );
    }

    #[test]
    fn tpath_through_outside_vertices() {
        // tree 0->1, 0->2; outside vertex 3 carries 1->3->2
        let d = Digraph::on_range(4, &[(0, 1), (0, 2), (1, 3), (3, 2)]).unwrap();
        let h = normal_assistant(&d, &star()).unwrap();
        assert_eq!(h.witness(v(1), v(2)).unwrap().vertices(), &[v(1), v(3), v(2)]);
    }

    #[test]
    fn added_pairs_close_downward() {
        // tree 0->1->3, 0->2->4 ; T-path 3->4 adds (1,2),(1,4),(3,2),(3,4)
        let d = Digraph::on_range(5, &[(0, 1), (1, 3), (0, 2), (2, 4), (3, 4)]).unwrap();
        let t = Arborescence::from_raw(0, &[(0, 1), (1, 3), (0, 2), (2, 4)]).unwrap();
        let h = normal_assistant(&d, &t).unwrap();
        let expect: BTreeSet<Edge> = [(1, 2), (1, 4), (3, 2), (3, 4)]
            .into_iter()
            .map(|(a, b)| (v(a), v(b)))
            .collect();
        assert_eq!(h.added(), &expect);
        assert_eq!(h.witness(v(1), v(2)).unwrap().vertices(), &[v(3), v(4)]);
        assert!(h.precedes(v(1), v(4)));
        assert!(!h.precedes(v(4), v(1)));
    }

    #[test]
    fn normalized_cycle_is_a_fixed_point() {
        // r=0 with children a=1, b=2, c=3; a->b->c->a
        let d = Digraph::on_range(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)]).unwrap();
        let t = Arborescence::from_raw(0, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let h = normal_assistant(&d, &t).unwrap();
        let c = normalize_cycle(&h, &[v(2), v(3), v(1)]).unwrap();
        assert_eq!(c.vertices, vec![v(2), v(3), v(1)]);
    }

    #[test]
    fn parent_edge_is_shortcut() {
        // tree 0->1->2, 0->3 ; 2->3, 3->1. Cycle 1,2,3 uses the tree edge 1->2.
        let d = Digraph::on_range(4, &[(0, 1), (1, 2), (0, 3), (2, 3), (3, 1)]).unwrap();
        let t = Arborescence::from_raw(0, &[(0, 1), (1, 2), (0, 3)]).unwrap();
        let h = normal_assistant(&d, &t).unwrap();
        let c = normalize_cycle(&h, &[v(1), v(2), v(3)]).unwrap();
        assert_eq!(c.vertices, vec![v(1), v(3)]);
    }

    #[test]
    fn shortcut_blocked_by_comparability_still_normalizes() {
        // tree 0->1 (u), 0->4 (x), 1->2 (v), 1->3 (w)
        // cross edges 2->3, 3->4, 4->1 give the H-cycle u v w x.
        let d = Digraph::on_range(5, &[(0, 1), (0, 4), (1, 2), (1, 3), (2, 3), (3, 4), (4, 1)])
            .unwrap();
        let t = Arborescence::from_raw(0, &[(0, 1), (0, 4), (1, 2), (1, 3)]).unwrap();
        let h = normal_assistant(&d, &t).unwrap();
        let c = normalize_cycle(&h, &[v(1), v(2), v(3), v(4)]).unwrap();
        assert!(c.vertices.len() <= 4);
        for (a, b) in c.edges() {
            assert!(h.has_edge(a, b));
            assert!(!t.comparable(a, b));
        }
        assert_eq!(c.vertices, vec![v(1), v(4)]);
    }

    #[test]
    fn non_cycles_are_rejected() {
        let d = Digraph::on_range(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let h = normal_assistant(&d, &star()).unwrap();
        assert!(matches!(normalize_cycle(&h, &[v(1), v(2)]), Err(ArborError::NotACycle(_))));
        assert!(matches!(normalize_cycle(&h, &[v(1)]), Err(ArborError::NotACycle(_))));
    }

    #[test]
    fn singleton_tree_is_normal() {
        let d = Digraph::on_range(2, &[(0, 1), (1, 0)]).unwrap();
        let t = Arborescence::singleton(v(1));
        assert_eq!(is_normal(&d, &t), Ok(Normality::Normal));
        assert_eq!(tpath_endpoints(&d, &t), BTreeSet::new());
    }
}
