use std::collections::BTreeMap;

use super::assistant::is_normal;
use super::{ArborError, Arborescence};
use crate::digraph::{Digraph, VertexId, VertexSet};

/// Exploration priority for depth-first search. Listed vertices come first in
/// the given order; the rest follow by ascending id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Priority {
    listed: Vec<VertexId>,
}

impl Priority {
    /// `highest_first[0]` is explored before everything else.
    pub fn new(highest_first: Vec<VertexId>) -> Self {
        Priority {
            listed: highest_first,
        }
    }

    pub fn from_raw(highest_first: &[u32]) -> Self {
        Priority::new(highest_first.iter().map(|&v| VertexId(v)).collect())
    }

    /// Smaller ids explored first.
    pub fn by_id() -> Self {
        Priority::default()
    }

    /// Position in exploration order: smaller means explored earlier.
    fn positions(&self) -> BTreeMap<VertexId, usize> {
        let mut pos = BTreeMap::new();
        for &v in &self.listed {
            let next = pos.len();
            pos.entry(v).or_insert(next);
        }
        pos
    }
}

/// Depth-first search from `r` along out-edges, trying unvisited
/// out-neighbours in decreasing priority.
pub fn dfs_build(d: &Digraph, r: VertexId, priority: &Priority) -> Result<Arborescence, ArborError> {
    if !d.has_vertex(r) {
        return Err(ArborError::RootMissing(r));
    }
    let pos = priority.positions();
    let key = |v: VertexId| (pos.get(&v).copied().unwrap_or(usize::MAX), v);
    let mut ordered: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    let mut neighbours = |v: VertexId| -> Vec<VertexId> {
        ordered
            .entry(v)
            .or_insert_with(|| {
                let mut n: Vec<VertexId> = d.out_neighbors(v).collect();
                n.sort_by_key(|&x| key(x));
                n
            })
            .clone()
    };

    let mut visited = VertexSet::from([r]);
    let mut parent = BTreeMap::new();
    let mut stack: Vec<(VertexId, Vec<VertexId>, usize)> = vec![(r, neighbours(r), 0)];
    while let Some((v, nbrs, i)) = stack.last_mut() {
        if *i == nbrs.len() {
            stack.pop();
            continue;
        }
        let x = nbrs[*i];
        *i += 1;
        if visited.insert(x) {
            parent.insert(x, *v);
            let n = neighbours(x);
            stack.push((x, n, 0));
        }
    }
    Ok(Arborescence::from_parents(r, parent).expect("search tree is an arborescence"))
}

/// Whether `t` arises from some depth-first search of `d`, decided through
/// normality on `d[V(t)]`.
pub fn is_dfs_tree(d: &Digraph, t: &Arborescence) -> Result<bool, ArborError> {
    if !d.has_vertex(t.root()) {
        return Err(ArborError::RootMissing(t.root()));
    }
    let reach = d.reachable_from(&VertexSet::from([t.root()]), &VertexSet::new());
    if reach != t.vertex_set() {
        return Err(ArborError::NotSpanningReachableSet);
    }
    let host = d.induced(&reach);
    Ok(is_normal(&host, t)?.is_normal())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn priority_picks_exploration_order() {
        // r=0, a=1, b=2 ; priority b > a
        let d = Digraph::on_range(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let t = dfs_build(&d, v(0), &Priority::from_raw(&[2, 1])).unwrap();
        assert_eq!(t.edges(), vec![(v(0), v(1)), (v(0), v(2))]);
        let t = dfs_build(&d, v(0), &Priority::by_id()).unwrap();
        assert_eq!(t.edges(), vec![(v(0), v(1)), (v(1), v(2))]);
    }

    #[test]
    fn symmetric_pair_gives_hamiltonian_paths() {
        let d = Digraph::on_range(3, &[(0, 1), (0, 2), (1, 2), (2, 1)]).unwrap();
        for p in [&[1u32, 2][..], &[2, 1]] {
            let t = dfs_build(&d, v(0), &Priority::from_raw(p)).unwrap();
            assert!(t.is_path());
            assert_eq!(t.len(), 3);
            assert!(is_dfs_tree(&d, &t).unwrap());
        }
        let star = Arborescence::from_raw(0, &[(0, 1), (0, 2)]).unwrap();
        assert!(!is_dfs_tree(&d, &star).unwrap());
    }

    #[test]
    fn single_vertex_and_missing_root() {
        let d = Digraph::on_range(1, &[]).unwrap();
        assert_eq!(dfs_build(&d, v(0), &Priority::by_id()).unwrap().len(), 1);
        assert_eq!(dfs_build(&d, v(3), &Priority::by_id()), Err(ArborError::RootMissing(v(3))));
    }

    #[test]
    fn unreachable_vertices_are_left_out() {
        let d = Digraph::on_range(3, &[(0, 1), (2, 0)]).unwrap();
        let t = dfs_build(&d, v(0), &Priority::by_id()).unwrap();
        assert_eq!(t.vertex_set(), VertexSet::from([v(0), v(1)]));
        let short = Arborescence::singleton(v(0));
        assert_eq!(is_dfs_tree(&d, &short), Err(ArborError::NotSpanningReachableSet));
    }

    #[test]
    fn hamiltonian_path_in_complete_symmetric() {
        let d = Digraph::complete_symmetric(4);
        let t = Arborescence::from_raw(0, &[(0, 2), (2, 1), (1, 3)]).unwrap();
        assert!(is_dfs_tree(&d, &t).unwrap());
        assert_eq!(dfs_build(&d, v(0), &Priority::from_raw(&[2, 1, 3])).unwrap(), t);
    }
}
