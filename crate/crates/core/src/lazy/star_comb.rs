use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::{truncate, LazyError, LazyFamily, VertexPredicate};
use crate::digraph::{VertexId, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StarComb {
    /// Spine from the root; each tooth path starts on the spine and ends in `W`.
    Comb {
        spine: Vec<VertexId>,
        teeth: Vec<Vec<VertexId>>,
    },
    /// Subdivided star: disjoint paths from the centre to leaves in `W`.
    Star {
        center: VertexId,
        paths: Vec<Vec<VertexId>>,
    },
    Exhausted {
        depth: usize,
    },
}

/// Finds a comb or a subdivided star with `k` ends in `w` inside the
/// depth-`d` window of a tree-shaped family, rooted at vertex 0.
pub fn star_comb(
    f: &LazyFamily,
    w: &VertexPredicate,
    k: usize,
    d: usize,
) -> Result<StarComb, LazyError> {
    if !f.tree_shaped() {
        return Err(LazyError::NotATree);
    }
    let trunc = truncate(f, d);
    let g = trunc.window();
    let mut adj: BTreeMap<VertexId, VertexSet> = BTreeMap::new();
    for v in g.vertices() {
        adj.entry(v).or_default();
    }
    for (a, b) in g.edges() {
        adj.get_mut(&a).unwrap().insert(b);
        adj.get_mut(&b).unwrap().insert(a);
    }
    let undirected_edges: usize = adj.values().map(VertexSet::len).sum::<usize>() / 2;
    let root = VertexId(0);
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut order = vec![root];
    let mut queue = VecDeque::from([root]);
    let mut seen = VertexSet::from([root]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[&x] {
            if seen.insert(y) {
                parent.insert(y, x);
                order.push(y);
                queue.push_back(y);
            }
        }
    }
    if seen.len() != adj.len() || undirected_edges + 1 != adj.len() {
        return Err(LazyError::NotATree);
    }
    let children = |x: VertexId| -> Vec<VertexId> {
        adj[&x]
            .iter()
            .copied()
            .filter(|y| parent.get(y) == Some(&x))
            .collect()
    };
    let mut cnt: BTreeMap<VertexId, usize> = BTreeMap::new();
    for &x in order.iter().rev() {
        let own = usize::from(w.test(x));
        let below: usize = children(x).iter().map(|c| cnt[c]).sum();
        cnt.insert(x, own + below);
    }
    // Walk down from `x` to the first vertex in W, through smallest ids.
    let descend = |x: VertexId| -> Vec<VertexId> {
        let mut path = vec![x];
        let mut y = x;
        while !w.test(y) {
            y = children(y)
                .into_iter()
                .find(|c| cnt[c] > 0)
                .expect("a subtree with positive count reaches W");
            path.push(y);
        }
        path
    };

    for &x in &order {
        let live: Vec<VertexId> = children(x).into_iter().filter(|c| cnt[c] > 0).collect();
        if live.len() >= k && k > 0 {
            let paths = live[..k]
                .iter()
                .map(|&c| {
                    let mut p = vec![x];
                    p.extend(descend(c));
                    p
                })
                .collect();
            return Ok(StarComb::Star { center: x, paths });
        }
    }

    let mut spine = Vec::new();
    let mut teeth = Vec::new();
    let mut x = root;
    while teeth.len() < k {
        spine.push(x);
        let kids = children(x);
        let next = kids
            .iter()
            .copied()
            .filter(|c| cnt[c] > 0)
            .max_by(|a, b| cnt[a].cmp(&cnt[b]).then(b.cmp(a)));
        if w.test(x) {
            teeth.push(vec![x]);
        } else if let Some(c) = kids
            .iter()
            .copied()
            .find(|&c| Some(c) != next && cnt[&c] > 0)
        {
            let mut p = vec![x];
            p.extend(descend(c));
            teeth.push(p);
        }
        match next {
            Some(n) => x = n,
            None => break,
        }
    }
    if teeth.len() >= k && k > 0 {
        Ok(StarComb::Comb { spine, teeth })
    } else {
        Ok(StarComb::Exhausted {
            depth: trunc.depth(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lazy::CombVertex;

    #[test]
    fn ray_gives_a_comb() {
        let r = star_comb(&LazyFamily::symmetric_ray(), &VertexPredicate::all(), 5, 10).unwrap();
        let StarComb::Comb { spine, teeth } = r else { panic!("expected comb") };
        assert_eq!(teeth.len(), 5);
        assert!(teeth.iter().all(|t| t.len() == 1));
        assert_eq!(spine.len(), 5);
    }

    #[test]
    fn star_family_gives_a_star() {
        let r = star_comb(&LazyFamily::infinite_star(), &VertexPredicate::all(), 5, 10).unwrap();
        let StarComb::Star { center, paths } = r else { panic!("expected star") };
        assert_eq!(center, VertexId(0));
        assert_eq!(paths.len(), 5);
    }

    #[test]
    fn comb_family_gives_a_bottom_comb() {
        let k = 4;
        let w = VertexPredicate::new("column feet", |v| {
            matches!(CombVertex::from_id(v), CombVertex::Column(_, 1))
        });
        let r = star_comb(&LazyFamily::comb_of_columns(), &w, k, 3 * k).unwrap();
        let StarComb::Comb { spine, teeth } = r else { panic!("expected comb") };
        assert_eq!(teeth.len(), k);
        for (i, s) in spine.iter().enumerate() {
            assert_eq!(CombVertex::from_id(*s), CombVertex::Bottom(i));
        }
    }

    #[test]
    fn too_many_teeth_exhaust_the_window() {
        let w = VertexPredicate::set(VertexSet::from([VertexId(3)]));
        let r = star_comb(&LazyFamily::symmetric_ray(), &w, 2, 6).unwrap();
        assert_eq!(r, StarComb::Exhausted { depth: 6 });
        assert_eq!(
            star_comb(&LazyFamily::directed_ladder(), &w, 2, 6),
            Err(LazyError::NotATree)
        );
    }
}
