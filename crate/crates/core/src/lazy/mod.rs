//! Infinite digraph families presented lazily by rounds, their finite
//! windows, and end approximations computed from strong-component towers.

mod faithful;
mod family;
mod necklace;
mod star_comb;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::arborescence::{is_normal, Arborescence, CycleCertificate, Normality};
use crate::digraph::{strong_components, Digraph, SccPartition, VertexId, VertexSet};
use crate::jung::{comb_search, CombSearch};

pub use faithful::{end_faithful_check, FaithfulEntry, FaithfulReport, HostView, RayTrace};
pub use family::{
    CombVertex, EndInfo, FamilySpec, LazyFamily, LimitEdges, VertexPredicate, DEFAULT_SLACK,
    FAMILY_NAMES,
};
pub use necklace::{necklace_prefix, NecklacePrefix};
pub use star_comb::{star_comb, StarComb};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LazyError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("family has no end {0}")]
    UnknownEnd(usize),
    #[error("the arborescence is not normal in the depth-{depth} window")]
    NotNormalAtDepth {
        depth: usize,
        certificate: CycleCertificate,
    },
    #[error("the tail of end {end} splits across strong components after deleting X_{n}")]
    TailSplit { end: usize, n: usize },
    #[error("the family is not tree-shaped")]
    NotATree,
    #[error("no necklace with {0} beads fits in the window")]
    NoNecklaceInWindow(usize),
    #[error("the family is not declared solid")]
    NotSolidFamily,
    #[error("no witness inside the window; raise the depth")]
    NoWitnessInWindow,
}

/// Finite window of a family: every vertex of the first `depth + slack`
/// rounds, with the induced edges.
#[derive(Debug, Clone)]
pub struct Truncation {
    depth: usize,
    rounds: usize,
    window: Digraph,
    boundary: VertexSet,
    round: BTreeMap<VertexId, usize>,
}

impl Truncation {
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Number of rounds in the window.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn window(&self) -> &Digraph {
        &self.window
    }

    /// Vertices with a neighbour outside the window.
    pub fn boundary(&self) -> &VertexSet {
        &self.boundary
    }

    pub fn round_of(&self, v: VertexId) -> Option<usize> {
        self.round.get(&v).copied()
    }

    /// `X_n`: the first `n` rounds.
    pub fn separator(&self, n: usize) -> VertexSet {
        self.round
            .iter()
            .filter(|(_, &r)| r < n)
            .map(|(&v, _)| v)
            .collect()
    }

    /// Window vertices with round in `from..until`.
    pub fn in_rounds(&self, from: usize, until: usize) -> Vec<VertexId> {
        self.round
            .iter()
            .filter(|(_, &r)| (from..until).contains(&r))
            .map(|(&v, _)| v)
            .collect()
    }

    /// Largest round present in the window.
    pub fn last_round(&self) -> usize {
        self.round.values().copied().max().unwrap_or(0)
    }
}

/// The depth-`d` window (at least depth 1).
pub fn truncate(f: &LazyFamily, d: usize) -> Truncation {
    let depth = d.max(1);
    let mut rounds = depth + f.slack();
    if let Some(n) = f.round_count() {
        rounds = rounds.min(n);
    }
    let mut round = BTreeMap::new();
    for k in 0..rounds {
        for v in f.round_members(k) {
            round.insert(v, k);
        }
    }
    let mut edges = Vec::new();
    let mut boundary = VertexSet::new();
    for &v in round.keys() {
        let (out, clipped_out) = f.out_within(v, rounds);
        let (_, clipped_in) = f.in_within(v, rounds);
        if clipped_out || clipped_in {
            boundary.insert(v);
        }
        edges.extend(out.into_iter().map(|w| (v, w)));
    }
    let mut window =
        Digraph::new(round.keys().copied(), edges).expect("family neighbourhoods are simple");
    for &v in round.keys() {
        window.set_name(v, f.label(v));
    }
    Truncation {
        depth,
        rounds,
        window,
        boundary,
        round,
    }
}

/// Which arborescence of a family to use.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum TreePresentation {
    /// The family's own parent rule.
    #[default]
    Canonical,
    /// An explicit parent map; vertices without a parent chain to `root`
    /// are left out.
    Explicit {
        root: VertexId,
        parent: BTreeMap<VertexId, VertexId>,
    },
}

impl TreePresentation {
    fn parent(&self, f: &LazyFamily, v: VertexId) -> Option<VertexId> {
        match self {
            TreePresentation::Canonical => f.tree_parent(v),
            TreePresentation::Explicit { parent, .. } => parent.get(&v).copied(),
        }
    }

    fn root(&self, f: &LazyFamily) -> VertexId {
        match self {
            TreePresentation::Canonical => f.root(),
            TreePresentation::Explicit { root, .. } => *root,
        }
    }

    /// The tree restricted to the window: everything reachable from the root
    /// by tree edges inside the window.
    pub fn window_tree(&self, f: &LazyFamily, w: &Truncation) -> Arborescence {
        let root = self.root(f);
        let mut children: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        for v in w.window.vertices() {
            if let Some(p) = self.parent(f, v) {
                if w.window.has_vertex(p) && v != root {
                    children.entry(p).or_default().push(v);
                }
            }
        }
        let mut parent = BTreeMap::new();
        let mut queue = VecDeque::from([root]);
        let mut seen = VertexSet::from([root]);
        while let Some(x) = queue.pop_front() {
            for &c in children.get(&x).map_or(&[][..], Vec::as_slice) {
                if seen.insert(c) {
                    parent.insert(c, x);
                    queue.push_back(c);
                }
            }
        }
        Arborescence::from_parents(root, parent).expect("parent rule restricted to a BFS tree")
    }
}

/// Window tree checked for normality in the window.
pub fn normal_window_tree(
    f: &LazyFamily,
    w: &Truncation,
    t: &TreePresentation,
) -> Result<Arborescence, LazyError> {
    let tree = t.window_tree(f, w);
    let host = w.window.induced(&tree.vertex_set());
    match is_normal(&host, &tree) {
        Ok(Normality::Normal) => Ok(tree),
        Ok(Normality::NotNormal(certificate)) => Err(LazyError::NotNormalAtDepth {
            depth: w.depth,
            certificate,
        }),
        Err(e) => Err(LazyError::BadParameters(format!("tree presentation: {e}"))),
    }
}

/// Strong components of `window - X_n` for `n = 0..=depth`.
pub fn component_tower(w: &Truncation) -> Vec<SccPartition> {
    (0..=w.depth)
        .map(|n| strong_components(&w.window, &w.separator(n)))
        .collect()
}

/// Representative ray vertices of `end` in rounds `d..d+slack`.
pub fn tail(f: &LazyFamily, w: &Truncation, end: usize) -> Vec<VertexId> {
    f.ray_segment(end, w.depth, w.rounds)
}

/// Component label of the tail of `end` in `part`, or `TailSplit`.
pub fn tail_label(
    part: &SccPartition,
    tail: &[VertexId],
    end: usize,
    n: usize,
) -> Result<usize, LazyError> {
    let labels: BTreeSet<Option<usize>> = tail.iter().map(|v| part.component_of(*v)).collect();
    match labels.into_iter().collect::<Vec<_>>().as_slice() {
        [Some(l)] => Ok(*l),
        _ => Err(LazyError::TailSplit { end, n }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparatorRow {
    pub n: usize,
    pub components: usize,
    /// Components meeting a round below the depth.
    pub core_components: usize,
    /// Distinct components among the oracle ends' tails.
    pub end_classes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndThread {
    pub ends: Vec<usize>,
    pub component_size: usize,
    /// The thread's component reaches the clipped boundary.
    pub approximate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndsReport {
    pub family: String,
    pub depth: usize,
    pub oracle_ends: usize,
    pub rows: Vec<SeparatorRow>,
    pub threads: Vec<EndThread>,
    pub thread_count: usize,
    /// Smallest `n` from which the class count equals the final one.
    pub stabilization: usize,
    pub agrees_with_oracle: bool,
}

/// Threads oracle ends through the component tower of the depth-`d` window.
pub fn ends_approx(f: &LazyFamily, d: usize) -> Result<EndsReport, LazyError> {
    let w = truncate(f, d);
    let tower = component_tower(&w);
    let ends = f.ends(w.depth);
    let tails: Vec<Vec<VertexId>> = ends.iter().map(|e| tail(f, &w, e.id)).collect();
    let mut rows = Vec::new();
    let mut last_labels = Vec::new();
    for (n, part) in tower.iter().enumerate() {
        let labels: Vec<usize> = ends
            .iter()
            .zip(&tails)
            .map(|(e, t)| tail_label(part, t, e.id, n))
            .collect::<Result<_, _>>()?;
        let core = part
            .components()
            .iter()
            .filter(|c| c.iter().any(|v| w.round_of(*v).is_some_and(|r| r < w.depth)))
            .count();
        rows.push(SeparatorRow {
            n,
            components: part.len(),
            core_components: core,
            end_classes: labels.iter().collect::<BTreeSet<_>>().len(),
        });
        last_labels = labels;
    }
    let last = tower.last().expect("tower is nonempty");
    let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (e, &l) in ends.iter().zip(&last_labels) {
        by_label.entry(l).or_default().push(e.id);
    }
    let threads: Vec<EndThread> = by_label
        .into_iter()
        .map(|(l, ends)| {
            let comp = last.component(l);
            EndThread {
                ends,
                component_size: comp.len(),
                approximate: comp.iter().any(|v| w.boundary.contains(v)),
            }
        })
        .collect();
    let final_classes = rows.last().map_or(0, |r| r.end_classes);
    let stabilization = rows
        .iter()
        .rposition(|r| r.end_classes != final_classes)
        .map_or(0, |i| i + 1);
    Ok(EndsReport {
        family: f.name().to_string(),
        depth: w.depth,
        oracle_ends: ends.len(),
        thread_count: threads.len(),
        agrees_with_oracle: threads.len() == ends.len(),
        rows,
        threads,
        stabilization,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolidityReport {
    pub family: String,
    pub depth: usize,
    pub bound: Option<usize>,
    pub max_core_components: usize,
    pub within_bound: bool,
}

/// Largest number of core components over the separators of the window,
/// compared with the family's declared bound.
pub fn solidity_check(f: &LazyFamily, d: usize) -> Result<SolidityReport, LazyError> {
    let r = ends_approx(f, d)?;
    let max = r.rows.iter().map(|row| row.core_components).max().unwrap_or(0);
    let bound = f.component_bound();
    Ok(SolidityReport {
        family: r.family,
        depth: r.depth,
        bound,
        max_core_components: max,
        within_bound: bound.is_some_and(|b| max <= b),
    })
}

/// Whether `C(X_n, end)` meets the predicate for every `n <= d`.
pub fn closure_contains(
    f: &LazyFamily,
    u: &VertexPredicate,
    end: usize,
    d: usize,
) -> Result<bool, LazyError> {
    if !f.has_end(end) {
        return Err(LazyError::UnknownEnd(end));
    }
    let w = truncate(f, d);
    let t = tail(f, &w, end);
    for n in 0..=w.depth {
        let part = strong_components(&w.window, &w.separator(n));
        let l = tail_label(&part, &t, end, n)?;
        if !part.component(l).iter().any(|v| u.test(*v)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Comb search inside the depth-`d` window.
pub fn comb_search_lazy(f: &LazyFamily, u: &VertexPredicate, k: usize, d: usize) -> CombSearch {
    let w = truncate(f, d);
    let targets: VertexSet = w.window.vertices().filter(|v| u.test(*v)).collect();
    comb_search(&w.window, &targets, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_have_expected_sizes() {
        let w = truncate(&LazyFamily::symmetric_ray(), 3);
        assert_eq!(w.window().vertex_count(), 3 + DEFAULT_SLACK);
        assert!(w.window().has_edge(VertexId(1), VertexId(0)));
        assert_eq!(w.boundary(), &VertexSet::from([VertexId(4)]));

        let w = truncate(&LazyFamily::comb_of_columns(), 10);
        let rounds = 10 + DEFAULT_SLACK;
        assert_eq!(w.window().vertex_count(), rounds * (rounds + 1));

        let d = Digraph::on_range(3, &[(0, 1), (1, 2)]).unwrap();
        let w = truncate(&LazyFamily::finite(&d).unwrap(), 5);
        assert_eq!(w.window().vertex_set(), d.vertex_set());
        assert!(w.window().edges().eq(d.edges()));
        assert!(w.boundary().is_empty());
    }

    #[test]
    fn ends_of_small_families() {
        let r = ends_approx(&LazyFamily::symmetric_ray(), 10).unwrap();
        assert_eq!((r.thread_count, r.agrees_with_oracle), (1, true));
        let r = ends_approx(&LazyFamily::directed_ladder(), 10).unwrap();
        assert_eq!((r.thread_count, r.agrees_with_oracle), (2, true));
        let r = ends_approx(&LazyFamily::comb_of_columns(), 10).unwrap();
        assert!(r.thread_count >= 5);
        assert_eq!(r.rows[0].end_classes, 10);
        let d = Digraph::on_range(2, &[(0, 1)]).unwrap();
        let r = ends_approx(&LazyFamily::finite(&d).unwrap(), 4).unwrap();
        assert_eq!(r.oracle_ends, 0);
    }

    #[test]
    fn solidity_bounds() {
        for f in [
            LazyFamily::symmetric_ray(),
            LazyFamily::directed_ladder(),
            LazyFamily::apex_necklace(),
        ] {
            assert!(solidity_check(&f, 12).unwrap().within_bound, "{}", f.name());
        }
        for f in [LazyFamily::transitive_omega(), LazyFamily::comb_of_columns()] {
            let r = solidity_check(&f, 12).unwrap();
            assert!(!r.within_bound);
            assert!(r.max_core_components >= 6, "{}", f.name());
        }
    }

    #[test]
    fn closure_examples() {
        let ray = LazyFamily::symmetric_ray();
        for d in 1..8 {
            assert!(closure_contains(&ray, &VertexPredicate::even(), 0, d).unwrap());
        }
        let ladder = LazyFamily::directed_ladder();
        let a0 = VertexPredicate::set(VertexSet::from([VertexId(0)]));
        assert!(!closure_contains(&ladder, &a0, 0, 2).unwrap());
        assert!(closure_contains(&ladder, &VertexPredicate::all(), 1, 6).unwrap());
        assert_eq!(
            closure_contains(&ladder, &a0, 5, 2),
            Err(LazyError::UnknownEnd(5))
        );
    }

    #[test]
    fn combs_in_windows() {
        let CombSearch::Found(c) =
            comb_search_lazy(&LazyFamily::symmetric_ray(), &VertexPredicate::all(), 5, 20)
        else {
            panic!("ray carries combs")
        };
        assert_eq!(c.teeth().len(), 5);
        assert!(matches!(
            comb_search_lazy(&LazyFamily::transitive_omega(), &VertexPredicate::all(), 3, 8),
            CombSearch::Found(_)
        ));
    }
}
