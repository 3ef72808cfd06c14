//! Exhaustive reference implementations. Everything here works from the
//! definitions on small instances and shares no search code with `arbor`.

use std::collections::{BTreeMap, BTreeSet};

use arbor::digraph::Edge;
use arbor::{Arborescence, Digraph, VertexId, VertexSet};

/// Dense copy of a digraph indexed by position in the sorted vertex list.
#[derive(Debug, Clone)]
pub struct Matrix {
    pub ids: Vec<VertexId>,
    pub adj: Vec<Vec<bool>>,
}

impl Matrix {
    pub fn of(d: &Digraph) -> Self {
        let ids: Vec<VertexId> = d.vertices().collect();
        let n = ids.len();
        let mut adj = vec![vec![false; n]; n];
        for (a, b) in d.edges() {
            let (i, j) = (ids.binary_search(&a).unwrap(), ids.binary_search(&b).unwrap());
            adj[i][j] = true;
        }
        Matrix { ids, adj }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn index(&self, v: VertexId) -> usize {
        self.ids.binary_search(&v).expect("vertex of the digraph")
    }
}

/// Every digraph on vertices `0..n`, as edge subsets of the `n(n-1)` pairs.
pub fn all_digraphs(n: u32) -> impl Iterator<Item = Digraph> {
    let pairs: Vec<(u32, u32)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let m = pairs.len();
    (0u64..1 << m).map(move |mask| {
        let edges: Vec<(u32, u32)> =
            (0..m).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        Digraph::on_range(n, &edges).expect("simple digraph")
    })
}

/// Parent-walk view of a tree: ancestors and up-sets by repeated parent steps.
#[derive(Debug, Clone)]
pub struct TreeView {
    pub parent: BTreeMap<VertexId, VertexId>,
    pub vertices: VertexSet,
    pub root: VertexId,
}

impl TreeView {
    pub fn of(t: &Arborescence) -> Self {
        let vertices: VertexSet = t.vertices().collect();
        let parent = vertices
            .iter()
            .filter_map(|&v| t.parent(v).map(|p| (v, p)))
            .collect();
        TreeView {
            parent,
            vertices,
            root: t.root(),
        }
    }

    /// `v` together with everything on its walk to the root.
    pub fn ancestors(&self, v: VertexId) -> VertexSet {
        let mut out = VertexSet::from([v]);
        let mut x = v;
        while let Some(&p) = self.parent.get(&x) {
            out.insert(p);
            x = p;
        }
        out
    }

    pub fn below_or_equal(&self, v: VertexId, w: VertexId) -> bool {
        self.ancestors(w).contains(&v)
    }

    pub fn incomparable(&self, v: VertexId, w: VertexId) -> bool {
        !self.below_or_equal(v, w) && !self.below_or_equal(w, v)
    }

    pub fn up(&self, v: VertexId) -> VertexSet {
        self.vertices
            .iter()
            .copied()
            .filter(|&x| self.below_or_equal(v, x))
            .collect()
    }

    pub fn depth(&self, v: VertexId) -> usize {
        self.ancestors(v).len() - 1
    }

    pub fn is_path_from_root(&self) -> bool {
        let mut child_count: BTreeMap<VertexId, usize> = BTreeMap::new();
        for &p in self.parent.values() {
            *child_count.entry(p).or_default() += 1;
        }
        child_count.values().all(|&c| c <= 1)
    }
}

/// All spanning arborescences of `d` rooted at `r`, by choosing an
/// in-neighbour as parent for every other vertex.
pub fn spanning_arborescences(d: &Digraph, r: VertexId) -> Vec<Arborescence> {
    let others: Vec<VertexId> = d.vertices().filter(|&v| v != r).collect();
    let choices: Vec<Vec<VertexId>> = others.iter().map(|&v| d.in_neighbors(v).collect()).collect();
    if choices.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; others.len()];
    loop {
        let parent: BTreeMap<VertexId, VertexId> = others
            .iter()
            .zip(&pick)
            .enumerate()
            .map(|(i, (&v, &k))| (v, choices[i][k]))
            .collect();
        let reaches_root = others.iter().all(|&v| {
            let mut x = v;
            for _ in 0..=others.len() {
                match parent.get(&x) {
                    Some(&p) => x = p,
                    None => break,
                }
            }
            x == r
        });
        if reaches_root {
            let edges = parent.iter().map(|(&c, &p)| (p, c));
            out.push(Arborescence::new(r, edges).expect("parent map reaching the root"));
        }
        let mut i = 0;
        loop {
            if i == pick.len() {
                return out;
            }
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// Edge sets of every depth-first search tree from `r`, over all orders in
/// which out-neighbours may be explored.
pub fn dfs_trees(d: &Digraph, r: VertexId) -> BTreeSet<Vec<Edge>> {
    fn go(
        m: &Matrix,
        visited: &mut Vec<bool>,
        stack: &mut Vec<usize>,
        edges: &mut Vec<Edge>,
        out: &mut BTreeSet<Vec<Edge>>,
    ) {
        let Some(&top) = stack.last() else {
            let mut e = edges.clone();
            e.sort_unstable();
            out.insert(e);
            return;
        };
        let fresh: Vec<usize> = (0..m.len()).filter(|&u| m.adj[top][u] && !visited[u]).collect();
        if fresh.is_empty() {
            stack.pop();
            go(m, visited, stack, edges, out);
            stack.push(top);
            return;
        }
        for u in fresh {
            visited[u] = true;
            stack.push(u);
            edges.push((m.ids[top], m.ids[u]));
            go(m, visited, stack, edges, out);
            edges.pop();
            stack.pop();
            visited[u] = false;
        }
    }
    let m = Matrix::of(d);
    let mut visited = vec![false; m.len()];
    let root = m.index(r);
    visited[root] = true;
    let mut out = BTreeSet::new();
    go(&m, &mut visited, &mut vec![root], &mut Vec::new(), &mut out);
    out
}

/// Every ordering of the tree's vertices in which parents precede children.
pub fn linear_extensions(t: &TreeView) -> Vec<Vec<VertexId>> {
    fn go(t: &TreeView, placed: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
        if placed.len() == t.vertices.len() {
            out.push(placed.clone());
            return;
        }
        let ready: Vec<VertexId> = t
            .vertices
            .iter()
            .copied()
            .filter(|v| !placed.contains(v))
            .filter(|v| t.parent.get(v).is_none_or(|p| placed.contains(p)))
            .collect();
        for v in ready {
            placed.push(v);
            go(t, placed, out);
            placed.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Simple paths from `from` to `to` whose interior avoids `avoid`, by
/// exhaustive extension. Stops after `limit` paths.
pub fn simple_paths(
    d: &Digraph,
    from: VertexId,
    to: VertexId,
    avoid: &VertexSet,
    limit: usize,
) -> Vec<Vec<VertexId>> {
    fn go(
        m: &Matrix,
        to: usize,
        blocked: &[bool],
        path: &mut Vec<usize>,
        on: &mut Vec<bool>,
        limit: usize,
        out: &mut Vec<Vec<VertexId>>,
    ) {
        if out.len() >= limit {
            return;
        }
        let x = *path.last().unwrap();
        for y in 0..m.len() {
            if !m.adj[x][y] || on[y] {
                continue;
            }
            if y == to {
                let mut p: Vec<VertexId> = path.iter().map(|&i| m.ids[i]).collect();
                p.push(m.ids[y]);
                out.push(p);
                continue;
            }
            if blocked[y] {
                continue;
            }
            on[y] = true;
            path.push(y);
            go(m, to, blocked, path, on, limit, out);
            path.pop();
            on[y] = false;
        }
    }
    let m = Matrix::of(d);
    let (s, e) = (m.index(from), m.index(to));
    let blocked: Vec<bool> = m.ids.iter().map(|v| avoid.contains(v)).collect();
    let mut on = vec![false; m.len()];
    on[s] = true;
    let mut out = Vec::new();
    if s != e {
        go(&m, e, &blocked, &mut vec![s], &mut on, limit, &mut out);
    }
    out
}

/// Pairs `(a, b)` of distinct tree vertices joined by a nontrivial path that
/// meets the tree only in its ends.
pub fn tpath_pairs(d: &Digraph, t: &TreeView) -> BTreeSet<Edge> {
    let mut out = BTreeSet::new();
    for &a in &t.vertices {
        let mut seen = VertexSet::from([a]);
        let mut frontier: Vec<VertexId> = vec![a];
        while let Some(x) = frontier.pop() {
            for y in d.out_neighbors(x) {
                if t.vertices.contains(&y) {
                    if y != a {
                        out.insert((a, y));
                    }
                } else if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
    }
    out
}

/// Tree edges plus `(v, w)` for incomparable `v`, `w` with a T-path from
/// the up-set of `v` to the up-set of `w`.
pub fn assistant_edges(d: &Digraph, t: &TreeView) -> BTreeSet<Edge> {
    let pairs = tpath_pairs(d, t);
    let mut out: BTreeSet<Edge> = t.parent.iter().map(|(&c, &p)| (p, c)).collect();
    let ups: BTreeMap<VertexId, VertexSet> = t.vertices.iter().map(|&v| (v, t.up(v))).collect();
    for &v in &t.vertices {
        for &w in &t.vertices {
            if v == w || !t.incomparable(v, w) {
                continue;
            }
            if pairs
                .iter()
                .any(|(a, b)| ups[&v].contains(a) && ups[&w].contains(b))
            {
                out.insert((v, w));
            }
        }
    }
    out
}

/// Reflexive-transitive closure over `vertices` by Floyd–Warshall.
pub fn closure(vertices: &VertexSet, edges: &BTreeSet<Edge>) -> BTreeMap<VertexId, VertexSet> {
    let ids: Vec<VertexId> = vertices.iter().copied().collect();
    let n = ids.len();
    let pos = |v: &VertexId| ids.binary_search(v).unwrap();
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in edges {
        r[pos(a)][pos(b)] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    ids.iter()
        .enumerate()
        .map(|(i, &v)| (v, (0..n).filter(|&j| r[i][j]).map(|j| ids[j]).collect()))
        .collect()
}

pub fn has_cycle(vertices: &VertexSet, edges: &BTreeSet<Edge>) -> bool {
    let c = closure(vertices, edges);
    edges.iter().any(|(a, b)| c[b].contains(a))
}

pub fn is_normal(d: &Digraph, t: &TreeView) -> bool {
    !has_cycle(&t.vertices, &assistant_edges(d, t))
}

/// Branch and path sensitivity of `order`, checked pair by pair.
pub fn is_sensitive(t: &TreeView, tpaths: &BTreeSet<Edge>, order: &[VertexId]) -> bool {
    let rank: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    for &v in order {
        for &w in order {
            if rank[&v] >= rank[&w] || !t.incomparable(v, w) {
                continue;
            }
            if t.up(v).iter().any(|x| rank[&w] <= rank[x]) {
                return false;
            }
            if tpaths.contains(&(w, v)) {
                return false;
            }
        }
    }
    true
}

/// Vertices reachable from `from` in `d - avoid`.
pub fn reach(d: &Digraph, from: VertexId, avoid: &VertexSet) -> VertexSet {
    let mut seen = VertexSet::from([from]);
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        for y in d.out_neighbors(x) {
            if !avoid.contains(&y) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen
}

pub fn strongly_connected(d: &Digraph, a: VertexId, b: VertexId, avoid: &VertexSet) -> bool {
    reach(d, a, avoid).contains(&b) && reach(d, b, avoid).contains(&a)
}

/// Each cycle vertex followed by the next one, wrapping around.
pub fn cycle_steps(c: &[VertexId]) -> impl Iterator<Item = Edge> + '_ {
    (0..c.len()).map(move |i| (c[i], c[(i + 1) % c.len()]))
}

/// A spine path plus paths that meet it only in their first vertex, are
/// pairwise disjoint, and end in `u`.
pub fn is_comb(d: &Digraph, spine: &[VertexId], paths: &[Vec<VertexId>], u: &VertexSet) -> bool {
    let is_path = |p: &[VertexId]| {
        !p.is_empty()
            && p.windows(2).all(|w| d.has_edge(w[0], w[1]))
            && p.iter().collect::<BTreeSet<_>>().len() == p.len()
    };
    if !is_path(spine) {
        return false;
    }
    let on_spine: VertexSet = spine.iter().copied().collect();
    let mut used = VertexSet::new();
    paths.iter().all(|p| {
        is_path(p)
            && on_spine.contains(&p[0])
            && p[1..].iter().all(|v| !on_spine.contains(v))
            && u.contains(p.last().unwrap())
            && p.iter().all(|v| used.insert(*v))
    })
}

/// Tree levels by parent-walk depth.
pub fn levels(t: &TreeView) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = Vec::new();
    for &v in &t.vertices {
        let k = t.depth(v);
        if out.len() <= k {
            out.resize(k + 1, VertexSet::new());
        }
        out[k].insert(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn digraph_counts() {
        assert_eq!(all_digraphs(3).count(), 64);
    }

    #[test]
    fn arborescences_of_complete_digraph() {
        // Cayley: n^(n-2) spanning trees, each rooted once at 0
        let d = Digraph::complete_symmetric(4);
        assert_eq!(spanning_arborescences(&d, v(0)).len(), 16);
    }

    #[test]
    fn dfs_runs_of_the_two_cycle_star() {
        let d = Digraph::on_range(3, &[(0, 1), (0, 2), (1, 2), (2, 1)]).unwrap();
        let runs = dfs_trees(&d, v(0));
        assert_eq!(runs.len(), 2);
        assert!(runs
            .iter()
            .all(|e| e.len() == 2 && !(e.contains(&(v(0), v(1))) && e.contains(&(v(0), v(2))))));
    }

    #[test]
    fn assistant_of_the_two_cycle_star() {
        let d = Digraph::on_range(3, &[(0, 1), (0, 2), (1, 2), (2, 1)]).unwrap();
        let t = TreeView::of(&Arborescence::from_raw(0, &[(0, 1), (0, 2)]).unwrap());
        let e = assistant_edges(&d, &t);
        assert!(e.contains(&(v(1), v(2))) && e.contains(&(v(2), v(1))));
        assert!(!is_normal(&d, &t));
    }

    #[test]
    fn extensions_of_a_star() {
        let t = TreeView::of(&Arborescence::from_raw(0, &[(0, 1), (0, 2), (0, 3)]).unwrap());
        assert_eq!(linear_extensions(&t).len(), 6);
    }

    #[test]
    fn paths_respect_avoidance() {
        let d = Digraph::on_range(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(simple_paths(&d, v(0), v(2), &VertexSet::new(), 10).len(), 2);
        assert_eq!(simple_paths(&d, v(0), v(2), &VertexSet::from([v(1)]), 10).len(), 1);
    }
}
