use std::collections::BTreeMap;

use serde::Serialize;

use super::{
    component_tower, normal_window_tree, tail, tail_label, truncate, LazyError, LazyFamily,
    TreePresentation, Truncation, VertexPredicate,
};
use crate::arborescence::Arborescence;
use crate::digraph::{strong_components, SccPartition, VertexId};

/// A family window together with its normal window tree and component tower.
#[derive(Debug, Clone)]
pub struct HostView {
    pub family: LazyFamily,
    pub trunc: Truncation,
    pub tree: Arborescence,
    pub tower: Vec<SccPartition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RayTrace {
    Traced { ray: Vec<VertexId>, frontier: VertexId },
    NoRay { stuck_at: VertexId },
    Ambiguous { at: VertexId, children: Vec<VertexId> },
}

impl HostView {
    pub fn new(f: &LazyFamily, d: usize, t: &TreePresentation) -> Result<Self, LazyError> {
        let trunc = truncate(f, d);
        let tree = normal_window_tree(f, &trunc, t)?;
        let tower = component_tower(&trunc);
        Ok(HostView {
            family: f.clone(),
            trunc,
            tree,
            tower,
        })
    }

    pub fn depth(&self) -> usize {
        self.trunc.depth()
    }

    fn round(&self, v: VertexId) -> usize {
        self.trunc.round_of(v).expect("window vertex")
    }

    /// Labels of the end's tail in every layer of the tower.
    pub fn end_labels(&self, end: usize) -> Result<Vec<usize>, LazyError> {
        if !self.family.has_end(end) {
            return Err(LazyError::UnknownEnd(end));
        }
        let t = tail(&self.family, &self.trunc, end);
        self.tower
            .iter()
            .enumerate()
            .map(|(n, part)| tail_label(part, &t, end, n))
            .collect()
    }

    /// `C(X_n, end)` in the window.
    pub fn end_component(&self, end: usize, n: usize) -> Result<&[VertexId], LazyError> {
        let labels = self.end_labels(end)?;
        Ok(self.tower[n].component(labels[n]))
    }

    pub fn closure_contains(&self, u: &VertexPredicate, end: usize) -> Result<bool, LazyError> {
        let labels = self.end_labels(end)?;
        Ok(labels
            .iter()
            .enumerate()
            .all(|(n, &l)| self.tower[n].component(l).iter().any(|v| u.test(*v))))
    }

    /// Follows the unique child whose up-closure meets `C(X_n, end)` for
    /// every `n <= d`, until the path leaves the first `d` rounds.
    pub fn trace(&self, end: usize) -> Result<RayTrace, LazyError> {
        let labels = self.end_labels(end)?;
        let t = &self.tree;
        let entries: Vec<Vec<usize>> = labels
            .iter()
            .enumerate()
            .map(|(n, &l)| {
                let mut e: Vec<usize> = self.tower[n]
                    .component(l)
                    .iter()
                    .filter_map(|v| t.entry_time(*v))
                    .collect();
                e.sort_unstable();
                e
            })
            .collect();
        let meets_all = |c: VertexId| {
            let (a, b) = (t.entry_time(c).unwrap(), t.exit_time(c).unwrap());
            entries.iter().all(|e| {
                let i = e.partition_point(|&x| x < a);
                i < e.len() && e[i] < b
            })
        };
        let d = self.depth();
        let mut x = t.root();
        let mut ray = vec![x];
        while self.round(x) < d {
            let cands: Vec<VertexId> =
                t.children(x).iter().copied().filter(|&c| meets_all(c)).collect();
            match cands.as_slice() {
                [] => return Ok(RayTrace::NoRay { stuck_at: x }),
                [c] => {
                    x = *c;
                    ray.push(x);
                }
                _ => {
                    return Ok(RayTrace::Ambiguous {
                        at: x,
                        children: cands,
                    })
                }
            }
        }
        Ok(RayTrace::Traced { ray, frontier: x })
    }

    /// Tree vertices in round `>= d` whose parent lies below round `d`.
    pub fn frontier(&self) -> Vec<VertexId> {
        let d = self.depth();
        self.tree
            .vertices()
            .filter(|&v| {
                self.round(v) >= d
                    && self.tree.parent(v).is_some_and(|p| self.round(p) < d)
            })
            .collect()
    }

    /// Frontier vertices with a tree descendant in a later round: the
    /// window's stand-ins for rays of the tree.
    pub fn tree_threads(&self) -> Vec<VertexId> {
        self.frontier()
            .into_iter()
            .filter(|&v| {
                let r = self.round(v);
                self.tree.up_closure(v).iter().any(|&y| self.round(y) > r)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaithfulEntry {
    pub end: usize,
    pub name: String,
    pub in_closure: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<RayTrace>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaithfulReport {
    pub family: String,
    pub depth: usize,
    pub entries: Vec<FaithfulEntry>,
    pub ends_in_closure: usize,
    pub traced: usize,
    pub ambiguous_events: usize,
    /// Distinct traced ends have distinct rays whose tails are separated by
    /// the down-closure of their last common vertex.
    pub separated: bool,
    pub ok: bool,
}

/// Traces one normal ray per end in the closure of `u` and checks that the
/// rays are unique and pairwise separated.
pub fn end_faithful_check(
    f: &LazyFamily,
    t: &TreePresentation,
    u: &VertexPredicate,
    d: usize,
) -> Result<FaithfulReport, LazyError> {
    let view = HostView::new(f, d, t)?;
    let mut entries = Vec::new();
    for e in f.ends(view.depth()) {
        let in_closure = view.closure_contains(u, e.id)?;
        let trace = if in_closure { Some(view.trace(e.id)?) } else { None };
        entries.push(FaithfulEntry {
            end: e.id,
            name: e.name,
            in_closure,
            trace,
        });
    }
    let rays: Vec<(usize, &Vec<VertexId>)> = entries
        .iter()
        .filter_map(|en| match &en.trace {
            Some(RayTrace::Traced { ray, .. }) => Some((en.end, ray)),
            _ => None,
        })
        .collect();
    let mut separated = true;
    let mut cache: BTreeMap<VertexId, SccPartition> = BTreeMap::new();
    for (i, &(e1, r1)) in rays.iter().enumerate() {
        for &(e2, r2) in &rays[i + 1..] {
            let common = r1.iter().zip(r2.iter()).take_while(|(a, b)| a == b).count();
            if common == r1.len() || common == r2.len() {
                separated = false;
                continue;
            }
            let m = r1[common - 1];
            let part = cache.entry(m).or_insert_with(|| {
                strong_components(view.trunc.window(), &view.tree.down_closure(m))
            });
            let t1 = tail(f, &view.trunc, e1);
            let t2 = tail(f, &view.trunc, e2);
            let (l1, l2) = (tail_label(part, &t1, e1, 0)?, tail_label(part, &t2, e2, 0)?);
            if l1 == l2 {
                separated = false;
            }
        }
    }
    let ends_in_closure = entries.iter().filter(|e| e.in_closure).count();
    let ambiguous_events = entries
        .iter()
        .filter(|e| matches!(e.trace, Some(RayTrace::Ambiguous { .. })))
        .count();
    let traced = rays.len();
    Ok(FaithfulReport {
        family: f.name().to_string(),
        depth: view.depth(),
        ok: traced == ends_in_closure && ambiguous_events == 0 && separated,
        entries,
        ends_in_closure,
        traced,
        ambiguous_events,
        separated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Digraph;

    #[test]
    fn ladder_rays_split_at_the_root() {
        let f = LazyFamily::directed_ladder();
        let r = end_faithful_check(&f, &TreePresentation::Canonical, &VertexPredicate::all(), 20)
            .unwrap();
        assert!(r.ok, "{r:?}");
        assert_eq!(r.traced, 2);
        let Some(RayTrace::Traced { ray, frontier }) = &r.entries[1].trace else {
            panic!("b is traced")
        };
        assert_eq!(ray[..3], [VertexId(0), VertexId(1), VertexId(3)]);
        assert_eq!(*frontier, VertexId(41));
    }

    #[test]
    fn comb_columns_are_traced() {
        let f = LazyFamily::comb_of_columns();
        let r = end_faithful_check(&f, &TreePresentation::Canonical, &VertexPredicate::all(), 12)
            .unwrap();
        assert!(r.ok);
        assert_eq!(r.traced, 12);
    }

    #[test]
    fn finite_families_are_vacuous() {
        let d = Digraph::on_range(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let f = LazyFamily::finite(&d).unwrap();
        let r = end_faithful_check(&f, &TreePresentation::Canonical, &VertexPredicate::all(), 5)
            .unwrap();
        assert!(r.ok);
        assert!(r.entries.is_empty());
    }

    #[test]
    fn non_normal_presentation_is_rejected() {
        // apex star over v0 <-> v1
        let f = LazyFamily::apex_necklace();
        let parent = BTreeMap::from([(VertexId(1), VertexId(0)), (VertexId(2), VertexId(0))]);
        let t = TreePresentation::Explicit {
            root: VertexId(0),
            parent,
        };
        assert!(matches!(
            end_faithful_check(&f, &t, &VertexPredicate::all(), 3),
            Err(LazyError::NotNormalAtDepth { .. })
        ));
    }

    #[test]
    fn frontier_threads() {
        let v = HostView::new(&LazyFamily::comb_of_columns(), 6, &TreePresentation::Canonical)
            .unwrap();
        assert_eq!(v.tree_threads().len(), 7);
        let v = HostView::new(&LazyFamily::infinite_star(), 6, &TreePresentation::Canonical)
            .unwrap();
        assert!(v.tree_threads().is_empty());
    }
}
