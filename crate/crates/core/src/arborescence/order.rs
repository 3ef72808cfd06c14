use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::assistant::{tpath_endpoints, NormalAssistant, Normality};
use super::{ArborError, Arborescence, CycleCertificate};
use crate::digraph::{find_path, Digraph, DirectedPath, Edge, VertexId};

/// A total order on `V(T)` as a rank map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearExtension {
    order: Vec<VertexId>,
    #[serde(skip)]
    rank: BTreeMap<VertexId, usize>,
}

impl LinearExtension {
    /// Builds from a sequence listing each vertex once, smallest first.
    pub fn new(order: Vec<VertexId>) -> Result<Self, ArborError> {
        let mut rank = BTreeMap::new();
        for (i, &v) in order.iter().enumerate() {
            if rank.insert(v, i).is_some() {
                return Err(ArborError::NotALinearExtension(format!("{v} listed twice")));
            }
        }
        Ok(LinearExtension { order, rank })
    }

    pub fn from_raw(order: &[u32]) -> Result<Self, ArborError> {
        LinearExtension::new(order.iter().map(|&v| VertexId(v)).collect())
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn rank(&self, v: VertexId) -> Option<usize> {
        self.rank.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Checks that the order covers `V(t)` exactly and extends `<=_T`.
    pub fn check_extends(&self, t: &Arborescence) -> Result<(), ArborError> {
        if self.order.len() != t.len() {
            return Err(ArborError::NotALinearExtension(format!(
                "{} vertices listed, tree has {}",
                self.order.len(),
                t.len()
            )));
        }
        if let Some(v) = self.order.iter().find(|v| !t.contains(**v)) {
            return Err(ArborError::NotALinearExtension(format!("{v} is not a tree vertex")));
        }
        for (p, c) in t.edges() {
            if self.rank[&p] > self.rank[&c] {
                return Err(ArborError::NotALinearExtension(format!(
                    "{c} is ranked before its parent {p}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Violation {
    /// `v` precedes `w` but some `v'` above `v` comes after `w`.
    Branch {
        v: VertexId,
        w: VertexId,
        above: VertexId,
    },
    /// `v` precedes `w` and a T-path runs from `w` to `v`.
    Path {
        v: VertexId,
        w: VertexId,
        path: DirectedPath,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "violation", rename_all = "snake_case")]
pub enum Sensitivity {
    Sensitive,
    Violation(Violation),
}

impl Sensitivity {
    pub fn is_sensitive(&self) -> bool {
        matches!(self, Sensitivity::Sensitive)
    }
}

/// Precomputed T-path endpoints for checking many orders on one `(d, t)`.
#[derive(Debug, Clone)]
pub struct SensitivityChecker<'a> {
    d: &'a Digraph,
    t: &'a Arborescence,
    endpoints: BTreeSet<Edge>,
    postorder: Vec<VertexId>,
}

impl<'a> SensitivityChecker<'a> {
    pub fn new(d: &'a Digraph, t: &'a Arborescence) -> Result<Self, ArborError> {
        t.check_in_host(d)?;
        let mut postorder = t.preorder_with(|v| t.children(v).to_vec());
        postorder.reverse();
        Ok(SensitivityChecker {
            d,
            t,
            endpoints: tpath_endpoints(d, t),
            postorder,
        })
    }

    pub fn check(&self, order: &LinearExtension) -> Result<Sensitivity, ArborError> {
        let t = self.t;
        order.check_extends(t)?;
        let rank = |v: VertexId| order.rank[&v];

        let mut max_up: BTreeMap<VertexId, (usize, VertexId)> = BTreeMap::new();
        for &v in &self.postorder {
            let mut best = (rank(v), v);
            for c in t.children(v) {
                best = best.max(max_up[c]);
            }
            max_up.insert(v, best);
        }

        for (i, &v) in order.order.iter().enumerate() {
            for &w in &order.order[i + 1..] {
                if t.comparable(v, w) {
                    continue;
                }
                let (top, above) = max_up[&v];
                if top > rank(w) {
                    return Ok(Sensitivity::Violation(Violation::Branch { v, w, above }));
                }
                if self.endpoints.contains(&(w, v)) {
                    let tree = t.vertex_set();
                    let path = find_path(
                        self.d,
                        &BTreeSet::from([w]),
                        &BTreeSet::from([v]),
                        &tree,
                    )
                    .expect("endpoint pairs carry a T-path");
                    return Ok(Sensitivity::Violation(Violation::Path { v, w, path }));
                }
            }
        }
        Ok(Sensitivity::Sensitive)
    }
}

pub fn is_sensitive(
    d: &Digraph,
    t: &Arborescence,
    order: &LinearExtension,
) -> Result<Sensitivity, ArborError> {
    SensitivityChecker::new(d, t)?.check(order)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum OrderOutcome {
    Order(LinearExtension),
    NotNormal { certificate: CycleCertificate },
}

/// Orders each sibling set topologically under `H` (smallest id first among
/// ready siblings) and ranks vertices by the resulting pre-order.
pub fn sensitive_order_build(d: &Digraph, t: &Arborescence) -> Result<OrderOutcome, ArborError> {
    let h = NormalAssistant::build_plain(d, t)?;
    if let Normality::NotNormal(c) = h.normality() {
        return Ok(OrderOutcome::NotNormal { certificate: c });
    }
    let order = t.preorder_with(|m| {
        let kids = t.children(m);
        let mut indeg: BTreeMap<VertexId, usize> = kids.iter().map(|&k| (k, 0)).collect();
        for &a in kids {
            for &b in kids {
                if h.has_edge(a, b) {
                    *indeg.get_mut(&b).unwrap() += 1;
                }
            }
        }
        let mut ready: BTreeSet<VertexId> =
            indeg.iter().filter(|(_, &n)| n == 0).map(|(&k, _)| k).collect();
        let mut out = Vec::with_capacity(kids.len());
        while let Some(a) = ready.pop_first() {
            out.push(a);
            for &b in kids {
                if h.has_edge(a, b) {
                    let n = indeg.get_mut(&b).unwrap();
                    *n -= 1;
                    if *n == 0 {
                        ready.insert(b);
                    }
                }
            }
        }
        debug_assert_eq!(out.len(), kids.len());
        out
    });
    Ok(OrderOutcome::Order(
        LinearExtension::new(order).expect("pre-order lists each vertex once"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> Arborescence {
        Arborescence::from_raw(0, &[(0, 1), (0, 2)]).unwrap()
    }

    #[test]
    fn cross_edge_orders_siblings() {
        let d = Digraph::on_range(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let t = star();
        let out = sensitive_order_build(&d, &t).unwrap();
        let OrderOutcome::Order(o) = out else { panic!("normal input") };
        assert_eq!(o, LinearExtension::from_raw(&[0, 1, 2]).unwrap());
        assert!(is_sensitive(&d, &t, &o).unwrap().is_sensitive());

        let bad = LinearExtension::from_raw(&[0, 2, 1]).unwrap();
        match is_sensitive(&d, &t, &bad).unwrap() {
            Sensitivity::Violation(Violation::Path { v, w, path }) => {
                assert_eq!((v, w), (VertexId(2), VertexId(1)));
                assert_eq!(path.first(), VertexId(1));
                assert_eq!(path.last(), VertexId(2));
            }
            other => panic!("expected a path violation, got {other:?}"),
        }
    }

    #[test]
    fn chain_has_only_the_tree_order() {
        let d = Digraph::complete_symmetric(3);
        let t = Arborescence::from_raw(0, &[(0, 1), (1, 2)]).unwrap();
        let OrderOutcome::Order(o) = sensitive_order_build(&d, &t).unwrap() else {
            panic!("chains are normal")
        };
        assert_eq!(o.order(), &[VertexId(0), VertexId(1), VertexId(2)]);
        assert!(is_sensitive(&d, &t, &o).unwrap().is_sensitive());
    }

    #[test]
    fn non_normal_input_yields_certificate() {
        let d = Digraph::on_range(3, &[(0, 1), (0, 2), (1, 2), (2, 1)]).unwrap();
        assert!(matches!(
            sensitive_order_build(&d, &star()).unwrap(),
            OrderOutcome::NotNormal { .. }
        ));
    }

    #[test]
    fn branch_violation_names_the_higher_vertex() {
        // 0 -> 1 -> 3, 0 -> 2 ; order 0 1 2 3 interleaves branches
        let d = Digraph::on_range(4, &[(0, 1), (1, 3), (0, 2)]).unwrap();
        let t = Arborescence::from_raw(0, &[(0, 1), (1, 3), (0, 2)]).unwrap();
        let o = LinearExtension::from_raw(&[0, 1, 2, 3]).unwrap();
        assert_eq!(
            is_sensitive(&d, &t, &o).unwrap(),
            Sensitivity::Violation(Violation::Branch {
                v: VertexId(1),
                w: VertexId(2),
                above: VertexId(3)
            })
        );
    }

    #[test]
    fn non_extensions_are_rejected() {
        let d = Digraph::on_range(3, &[(0, 1), (0, 2)]).unwrap();
        let t = star();
        for o in [&[1, 0, 2][..], &[0, 1], &[0, 1, 2, 3], &[0, 0, 1]] {
            let r = LinearExtension::from_raw(o).and_then(|o| is_sensitive(&d, &t, &o));
            assert!(matches!(r, Err(ArborError::NotALinearExtension(_))), "{o:?}");
        }
    }
}
