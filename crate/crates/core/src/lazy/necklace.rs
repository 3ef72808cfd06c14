use serde::Serialize;

use super::{truncate, LazyError, LazyFamily};
use crate::digraph::{find_path, DirectedPath, VertexId, VertexSet};

/// The first beads of a necklace representing an end, with links in both
/// directions between consecutive beads.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecklacePrefix {
    pub end: usize,
    pub beads: Vec<Vec<VertexId>>,
    pub forward: Vec<DirectedPath>,
    pub backward: Vec<DirectedPath>,
    /// For declared vertex-end limit edges into this end: the apex and one
    /// edge head in each bead.
    pub apex_edges: Vec<(VertexId, Vec<VertexId>)>,
}

/// Singleton beads along the representative ray of `end`.
pub fn necklace_prefix(
    f: &LazyFamily,
    end: usize,
    k: usize,
    d: usize,
) -> Result<NecklacePrefix, LazyError> {
    if !f.has_end(end) {
        return Err(LazyError::UnknownEnd(end));
    }
    let trunc = truncate(f, d);
    let g = trunc.window();
    let beads: Vec<Vec<VertexId>> = (0..k)
        .map(|m| f.ray(end, m).filter(|v| g.has_vertex(*v)).map(|v| vec![v]))
        .collect::<Option<_>>()
        .ok_or(LazyError::NoNecklaceInWindow(k))?;
    let all_beads: VertexSet = beads.iter().flatten().copied().collect();
    let mut used = VertexSet::new();
    let mut link = |from: &[VertexId], to: &[VertexId]| {
        let src: VertexSet = from.iter().copied().collect();
        let dst: VertexSet = to.iter().copied().collect();
        let forbidden: VertexSet = all_beads.union(&used).copied().collect();
        let p = find_path(g, &src, &dst, &forbidden).ok_or(LazyError::NoNecklaceInWindow(k))?;
        used.extend(p.interior().iter().copied());
        Ok::<_, LazyError>(p)
    };
    let mut forward = Vec::new();
    let mut backward = Vec::new();
    for pair in beads.windows(2) {
        forward.push(link(&pair[0], &pair[1])?);
        backward.push(link(&pair[1], &pair[0])?);
    }
    let mut apex_edges = Vec::new();
    for (apex, e) in f.limit_edges().vertex_end {
        if e != end {
            continue;
        }
        let heads: Vec<VertexId> = beads
            .iter()
            .map(|b| b.iter().copied().find(|&x| g.has_edge(apex, x)))
            .collect::<Option<_>>()
            .ok_or(LazyError::NoNecklaceInWindow(k))?;
        apex_edges.push((apex, heads));
    }
    Ok(NecklacePrefix {
        end,
        beads,
        forward,
        backward,
        apex_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ray_beads_are_singletons() {
        let n = necklace_prefix(&LazyFamily::symmetric_ray(), 0, 4, 10).unwrap();
        assert_eq!(n.beads.len(), 4);
        assert!(n.forward.iter().chain(&n.backward).all(|p| p.len() == 2));
        assert!(n.apex_edges.is_empty());
    }

    #[test]
    fn apex_reaches_every_bead() {
        let n = necklace_prefix(&LazyFamily::apex_necklace(), 0, 4, 10).unwrap();
        assert_eq!(n.apex_edges.len(), 1);
        assert_eq!(n.apex_edges[0].0, VertexId(0));
        assert_eq!(n.apex_edges[0].1.len(), 4);
    }

    #[test]
    fn ladder_a_ray() {
        let n = necklace_prefix(&LazyFamily::directed_ladder(), 0, 3, 10).unwrap();
        assert_eq!(n.beads, vec![vec![VertexId(0)], vec![VertexId(2)], vec![VertexId(4)]]);
    }

    #[test]
    fn small_windows_and_unknown_ends() {
        assert_eq!(
            necklace_prefix(&LazyFamily::symmetric_ray(), 0, 9, 3),
            Err(LazyError::NoNecklaceInWindow(9))
        );
        assert_eq!(
            necklace_prefix(&LazyFamily::transitive_omega(), 0, 2, 3),
            Err(LazyError::UnknownEnd(0))
        );
    }
}
