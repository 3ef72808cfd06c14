use serde::Serialize;

use super::assistant::{NormalAssistant, Normality};
use super::{ArborError, Arborescence};
use crate::digraph::{find_path, Digraph, DirectedPath, VertexId, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Separation {
    /// Every `w`–`v` path meets `⌊v⌋ ∩ ⌊w⌋`.
    Holds { separator: VertexSet },
    /// A `w`–`v` path avoiding the separator.
    CounterPath { separator: VertexSet, path: DirectedPath },
}

impl Separation {
    pub fn holds(&self) -> bool {
        matches!(self, Separation::Holds { .. })
    }
}

fn require_normal(d: &Digraph, t: &Arborescence) -> Result<NormalAssistant, ArborError> {
    let h = NormalAssistant::build_plain(d, t)?;
    match h.normality() {
        Normality::Normal => Ok(h),
        Normality::NotNormal(c) => Err(ArborError::NotNormalInput(c)),
    }
}

/// For incomparable `v`, `w` whose branch at the meet is not below `v` in
/// the normal order, checks that `⌊v⌋ ∩ ⌊w⌋` separates `w` from `v`.
pub fn separation_check(
    d: &Digraph,
    t: &Arborescence,
    v: VertexId,
    w: VertexId,
) -> Result<Separation, ArborError> {
    for x in [v, w] {
        if !t.contains(x) {
            return Err(ArborError::VertexNotInTree(x));
        }
    }
    let h = require_normal(d, t)?;
    if t.comparable(v, w) {
        return Err(ArborError::ComparableVertices(v, w));
    }
    let branch = t.root_path(w)[t.level(t.meet(v, w)) + 1];
    if h.precedes(branch, v) {
        return Err(ArborError::PreconditionOrderViolated { v, w });
    }
    let separator: VertexSet = t
        .down_closure(v)
        .intersection(&t.down_closure(w))
        .copied()
        .collect();
    Ok(
        match find_path(d, &VertexSet::from([w]), &VertexSet::from([v]), &separator) {
            None => Separation::Holds { separator },
            Some(path) => Separation::CounterPath { separator, path },
        },
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelEntry {
    pub level: usize,
    pub vertices: Vec<VertexId>,
    pub acyclic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<VertexId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub levels: Vec<LevelEntry>,
    pub all_acyclic: bool,
}

/// Levels of a normal tree, each checked for acyclicity in `d`.
pub fn level_partition(d: &Digraph, t: &Arborescence) -> Result<LevelReport, ArborError> {
    require_normal(d, t)?;
    let levels: Vec<LevelEntry> = t
        .levels()
        .into_iter()
        .enumerate()
        .map(|(level, vertices)| {
            let cycle = d.induced(&vertices.iter().copied().collect()).find_cycle();
            LevelEntry {
                level,
                vertices,
                acyclic: cycle.is_none(),
                cycle,
            }
        })
        .collect();
    let all_acyclic = levels.iter().all(|l| l.acyclic);
    Ok(LevelReport {
        levels,
        all_acyclic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn separation_on_a_star() {
        let d = Digraph::on_range(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let t = Arborescence::from_raw(0, &[(0, 1), (0, 2)]).unwrap();
        // 1 precedes 2 in the normal order, so (v, w) = (1, 2) qualifies.
        let s = separation_check(&d, &t, v(1), v(2)).unwrap();
        assert_eq!(s, Separation::Holds { separator: VertexSet::from([v(0)]) });
        assert_eq!(
            separation_check(&d, &t, v(2), v(1)),
            Err(ArborError::PreconditionOrderViolated { v: v(2), w: v(1) })
        );
        assert_eq!(
            separation_check(&d, &t, v(0), v(1)),
            Err(ArborError::ComparableVertices(v(0), v(1)))
        );
    }

    #[test]
    fn separation_needs_normal_input() {
        let d = Digraph::on_range(3, &[(0, 1), (0, 2), (1, 2), (2, 1)]).unwrap();
        let t = Arborescence::from_raw(0, &[(0, 1), (0, 2)]).unwrap();
        assert!(matches!(
            separation_check(&d, &t, v(1), v(2)),
            Err(ArborError::NotNormalInput(_))
        ));
        assert!(matches!(level_partition(&d, &t), Err(ArborError::NotNormalInput(_))));
    }

    #[test]
    fn levels_of_chain_and_star() {
        let d = Digraph::complete_symmetric(3);
        let chain = Arborescence::from_raw(0, &[(0, 1), (1, 2)]).unwrap();
        let r = level_partition(&d, &chain).unwrap();
        assert!(r.all_acyclic);
        assert!(r.levels.iter().all(|l| l.vertices.len() == 1));

        let d = Digraph::on_range(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let star = Arborescence::from_raw(0, &[(0, 1), (0, 2)]).unwrap();
        let r = level_partition(&d, &star).unwrap();
        assert_eq!(r.levels[1].vertices, vec![v(1), v(2)]);
        assert!(r.all_acyclic);
    }
}
