use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::LazyError;
use crate::arborescence::{dfs_build, Priority};
use crate::digraph::{Digraph, VertexId, VertexSet};

/// Default window padding in rounds.
pub const DEFAULT_SLACK: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Shape {
    SymmetricRay,
    DirectedLadder,
    CombOfColumns,
    ApexNecklace,
    TransitiveOmega,
    InfiniteStar,
    Finite { d: Digraph, parent: BTreeMap<VertexId, VertexId> },
}

/// Vertices of the comb family: the bottom ray `b_i` and column vertices
/// `v_{i,j}` with `j >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombVertex {
    Bottom(usize),
    Column(usize, usize),
}

impl CombVertex {
    pub fn round(self) -> usize {
        match self {
            CombVertex::Bottom(i) => i,
            CombVertex::Column(i, j) => i.max(j - 1),
        }
    }

    pub fn id(self) -> VertexId {
        let k = self.round();
        let start = k * (k + 1);
        let off = match self {
            CombVertex::Bottom(_) => 0,
            CombVertex::Column(i, j) if i == k => j,
            CombVertex::Column(i, _) => k + 2 + i,
        };
        VertexId((start + off) as u32)
    }

    pub fn from_id(v: VertexId) -> CombVertex {
        let id = v.index();
        let mut k = ((id as f64).sqrt() as usize).saturating_sub(1);
        while (k + 1) * (k + 2) <= id {
            k += 1;
        }
        while k * (k + 1) > id {
            k -= 1;
        }
        let o = id - k * (k + 1);
        match o {
            0 => CombVertex::Bottom(k),
            o if o <= k + 1 => CombVertex::Column(k, o),
            o => CombVertex::Column(o - k - 2, k + 1),
        }
    }
}

/// Symbolic end of a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndInfo {
    pub id: usize,
    pub name: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LimitEdges {
    /// End-to-end limit edges.
    pub ends: Vec<(usize, usize)>,
    /// Vertex-to-end limit edges.
    pub vertex_end: Vec<(VertexId, usize)>,
}

/// A countable digraph presented by rounds: finite vertex batches whose
/// union is everything, with computable neighbourhoods.
///
/// Vertex ids are indices of the enumeration. The separator `X_n` is the
/// union of rounds `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LazyFamily {
    shape: Shape,
    slack: usize,
}

/// Wire form: `{"family":"directed_ladder","params":{},"depth":20}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub family: String,
    #[serde(default)]
    pub params: serde_json::Map<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

pub const FAMILY_NAMES: [&str; 7] = [
    "symmetric_ray",
    "directed_ladder",
    "comb_of_columns",
    "apex_necklace",
    "transitive_omega",
    "infinite_star",
    "finite",
];

impl LazyFamily {
    fn with(shape: Shape) -> Self {
        LazyFamily {
            shape,
            slack: DEFAULT_SLACK,
        }
    }

    pub fn symmetric_ray() -> Self {
        Self::with(Shape::SymmetricRay)
    }

    pub fn directed_ladder() -> Self {
        Self::with(Shape::DirectedLadder)
    }

    pub fn comb_of_columns() -> Self {
        Self::with(Shape::CombOfColumns)
    }

    pub fn apex_necklace() -> Self {
        Self::with(Shape::ApexNecklace)
    }

    pub fn transitive_omega() -> Self {
        Self::with(Shape::TransitiveOmega)
    }

    pub fn infinite_star() -> Self {
        Self::with(Shape::InfiniteStar)
    }

    /// Embeds a finite digraph, relabelling its vertices `0..n` in id order;
    /// old ids survive as names. One vertex per round; the tree is the
    /// depth-first search tree from vertex 0.
    pub fn finite(d: &Digraph) -> Result<Self, LazyError> {
        if d.vertex_count() == 0 {
            return Err(LazyError::BadParameters("empty digraph".into()));
        }
        let index: BTreeMap<VertexId, VertexId> = d
            .vertices()
            .enumerate()
            .map(|(i, v)| (v, VertexId(i as u32)))
            .collect();
        let mut relabelled = Digraph::new(
            index.values().copied(),
            d.edges().map(|(a, b)| (index[&a], index[&b])),
        )
        .expect("relabelling keeps the digraph simple");
        for (old, new) in &index {
            relabelled.set_name(*new, d.label(*old));
        }
        let parent = dfs_build(&relabelled, VertexId(0), &Priority::by_id())
            .expect("vertex 0 exists")
            .edges()
            .into_iter()
            .map(|(p, c)| (c, p))
            .collect();
        Ok(Self::with(Shape::Finite {
            d: relabelled,
            parent,
        }))
    }

    pub fn with_slack(mut self, slack: usize) -> Self {
        self.slack = slack.max(1);
        self
    }

    pub fn from_spec(spec: &FamilySpec) -> Result<Self, LazyError> {
        let mut params = spec.params.clone();
        let slack = match params.remove("slack") {
            None => DEFAULT_SLACK,
            Some(v) => v
                .as_u64()
                .filter(|&s| s >= 1)
                .ok_or_else(|| LazyError::BadParameters("slack must be a positive integer".into()))?
                as usize,
        };
        let family = match spec.family.as_str() {
            "symmetric_ray" => Self::symmetric_ray(),
            "directed_ladder" => Self::directed_ladder(),
            "comb_of_columns" => Self::comb_of_columns(),
            "apex_necklace" => Self::apex_necklace(),
            "transitive_omega" => Self::transitive_omega(),
            "infinite_star" => Self::infinite_star(),
            "finite" => {
                let doc = params
                    .remove("digraph")
                    .ok_or_else(|| LazyError::BadParameters("finite needs params.digraph".into()))?;
                let d: Digraph = serde_json::from_value(doc)
                    .map_err(|e| LazyError::BadParameters(e.to_string()))?;
                Self::finite(&d)?
            }
            other => return Err(LazyError::UnknownFamily(other.to_string())),
        };
        if let Some(k) = params.keys().next() {
            return Err(LazyError::BadParameters(format!("unknown parameter {k}")));
        }
        Ok(family.with_slack(slack))
    }

    pub fn name(&self) -> &'static str {
        match self.shape {
            Shape::SymmetricRay => "symmetric_ray",
            Shape::DirectedLadder => "directed_ladder",
            Shape::CombOfColumns => "comb_of_columns",
            Shape::ApexNecklace => "apex_necklace",
            Shape::TransitiveOmega => "transitive_omega",
            Shape::InfiniteStar => "infinite_star",
            Shape::Finite { .. } => "finite",
        }
    }

    pub fn slack(&self) -> usize {
        self.slack
    }

    /// The embedded digraph of a finite family.
    pub fn finite_digraph(&self) -> Option<&Digraph> {
        match &self.shape {
            Shape::Finite { d, .. } => Some(d),
            _ => None,
        }
    }

    pub fn declared_solid(&self) -> bool {
        matches!(
            self.shape,
            Shape::SymmetricRay | Shape::DirectedLadder | Shape::ApexNecklace | Shape::Finite { .. }
        )
    }

    /// Bound on the number of strong components of `D - X_n` for solid families.
    pub fn component_bound(&self) -> Option<usize> {
        match &self.shape {
            Shape::SymmetricRay => Some(1),
            Shape::DirectedLadder | Shape::ApexNecklace => Some(2),
            Shape::Finite { d, .. } => Some(d.vertex_count()),
            _ => None,
        }
    }

    /// Whether the underlying undirected graph is a tree.
    pub fn tree_shaped(&self) -> bool {
        matches!(
            self.shape,
            Shape::SymmetricRay | Shape::CombOfColumns | Shape::InfiniteStar
        )
    }

    pub fn round(&self, v: VertexId) -> Option<usize> {
        let i = v.index();
        match &self.shape {
            Shape::SymmetricRay | Shape::TransitiveOmega | Shape::InfiniteStar => Some(i),
            Shape::DirectedLadder => Some(i / 2),
            Shape::CombOfColumns => Some(CombVertex::from_id(v).round()),
            Shape::ApexNecklace => Some(i.saturating_sub(1)),
            Shape::Finite { d, .. } => d.has_vertex(v).then_some(i),
        }
    }

    pub fn round_members(&self, k: usize) -> Vec<VertexId> {
        let ids: Vec<usize> = match &self.shape {
            Shape::SymmetricRay | Shape::TransitiveOmega | Shape::InfiniteStar => vec![k],
            Shape::DirectedLadder => vec![2 * k, 2 * k + 1],
            Shape::CombOfColumns => (k * (k + 1)..(k + 1) * (k + 2)).collect(),
            Shape::ApexNecklace if k == 0 => vec![0, 1],
            Shape::ApexNecklace => vec![k + 1],
            Shape::Finite { d, .. } if k < d.vertex_count() => vec![k],
            Shape::Finite { .. } => vec![],
        };
        ids.into_iter().map(|i| VertexId(i as u32)).collect()
    }

    /// Number of rounds, if finite.
    pub fn round_count(&self) -> Option<usize> {
        self.finite_digraph().map(Digraph::vertex_count)
    }

    /// Out-neighbours with round below `rounds`, and whether any were cut off.
    pub fn out_within(&self, v: VertexId, rounds: usize) -> (Vec<VertexId>, bool) {
        self.neighbours_within(v, rounds, true)
    }

    /// In-neighbours with round below `rounds`, and whether any were cut off.
    pub fn in_within(&self, v: VertexId, rounds: usize) -> (Vec<VertexId>, bool) {
        self.neighbours_within(v, rounds, false)
    }

    fn neighbours_within(&self, v: VertexId, rounds: usize, out: bool) -> (Vec<VertexId>, bool) {
        let i = v.index();
        let id = |x: usize| VertexId(x as u32);
        let (mut list, infinite): (Vec<VertexId>, bool) = match &self.shape {
            Shape::SymmetricRay => {
                let mut l = vec![id(i + 1)];
                if i > 0 {
                    l.push(id(i - 1));
                }
                (l, false)
            }
            Shape::DirectedLadder => {
                let mut l = vec![id(i + 2)];
                if i >= 2 {
                    l.push(id(i - 2));
                }
                let a_side = i.is_multiple_of(2);
                if a_side && out {
                    l.push(id(i + 1));
                }
                if !a_side && !out {
                    l.push(id(i - 1));
                }
                (l, false)
            }
            Shape::CombOfColumns => {
                let l = match CombVertex::from_id(v) {
                    CombVertex::Bottom(k) => {
                        let mut l = vec![CombVertex::Column(k, 1).id()];
                        if out {
                            l.push(CombVertex::Bottom(k + 1).id());
                        } else if k > 0 {
                            l.push(CombVertex::Bottom(k - 1).id());
                        }
                        l
                    }
                    CombVertex::Column(k, j) => vec![
                        CombVertex::Column(k, j + 1).id(),
                        if j == 1 {
                            CombVertex::Bottom(k).id()
                        } else {
                            CombVertex::Column(k, j - 1).id()
                        },
                    ],
                };
                (l, false)
            }
            Shape::ApexNecklace => {
                if i == 0 {
                    return if out {
                        ((1..=rounds).map(id).collect(), true)
                    } else {
                        (vec![], false)
                    };
                }
                let mut l = vec![id(i + 1)];
                if i > 1 {
                    l.push(id(i - 1));
                }
                if !out {
                    l.push(id(0));
                }
                (l, false)
            }
            Shape::TransitiveOmega => {
                if out {
                    return ((i + 1..rounds).map(id).collect(), true);
                }
                ((0..i).map(id).collect(), false)
            }
            Shape::InfiniteStar => {
                if i == 0 {
                    return ((1..rounds).map(id).collect(), true);
                }
                (vec![id(0)], false)
            }
            Shape::Finite { d, .. } => {
                let l = if out {
                    d.out_neighbors(v).collect()
                } else {
                    d.in_neighbors(v).collect()
                };
                (l, false)
            }
        };
        let before = list.len();
        list.retain(|x| self.round(*x).is_some_and(|r| r < rounds));
        list.sort_unstable();
        (list.clone(), infinite || list.len() < before)
    }

    /// Ends visible at depth `d`.
    pub fn ends(&self, d: usize) -> Vec<EndInfo> {
        let e = |id: usize, name: &str| EndInfo {
            id,
            name: name.to_string(),
        };
        match self.shape {
            Shape::SymmetricRay | Shape::ApexNecklace => vec![e(0, "omega")],
            Shape::DirectedLadder => vec![e(0, "omega_a"), e(1, "omega_b")],
            Shape::CombOfColumns => (0..d).map(|i| e(i, &format!("omega_{i}"))).collect(),
            _ => vec![],
        }
    }

    pub fn end_name(&self, end: usize) -> String {
        match self.shape {
            Shape::DirectedLadder => ["omega_a", "omega_b"].get(end).unwrap_or(&"?").to_string(),
            Shape::CombOfColumns => format!("omega_{end}"),
            _ => "omega".to_string(),
        }
    }

    pub fn has_end(&self, end: usize) -> bool {
        match self.shape {
            Shape::SymmetricRay | Shape::ApexNecklace => end == 0,
            Shape::DirectedLadder => end < 2,
            Shape::CombOfColumns => true,
            _ => false,
        }
    }

    /// The `m`-th vertex of the representative ray of `end`.
    pub fn ray(&self, end: usize, m: usize) -> Option<VertexId> {
        if !self.has_end(end) {
            return None;
        }
        let id = match self.shape {
            Shape::SymmetricRay => m,
            Shape::DirectedLadder => 2 * m + end,
            Shape::CombOfColumns => return Some(CombVertex::Column(end, m + 1).id()),
            Shape::ApexNecklace => m + 1,
            _ => return None,
        };
        Some(VertexId(id as u32))
    }

    /// Ray vertices whose round lies in `from..until`.
    pub fn ray_segment(&self, end: usize, from: usize, until: usize) -> Vec<VertexId> {
        let mut out = Vec::new();
        let mut m = 0;
        while let Some(v) = self.ray(end, m) {
            let r = self.round(v).expect("ray vertices have rounds");
            if r >= until {
                break;
            }
            if r >= from {
                out.push(v);
            }
            m += 1;
        }
        out
    }

    pub fn limit_edges(&self) -> LimitEdges {
        match self.shape {
            Shape::DirectedLadder => LimitEdges {
                ends: vec![(0, 1)],
                vertex_end: vec![],
            },
            Shape::ApexNecklace => LimitEdges {
                ends: vec![],
                vertex_end: vec![(VertexId(0), 0)],
            },
            _ => LimitEdges::default(),
        }
    }

    pub fn root(&self) -> VertexId {
        VertexId(0)
    }

    /// Parent in the family's canonical arborescence.
    pub fn tree_parent(&self, v: VertexId) -> Option<VertexId> {
        let i = v.index();
        let id = |x: usize| Some(VertexId(x as u32));
        match &self.shape {
            _ if i == 0 => None,
            Shape::SymmetricRay => id(i - 1),
            Shape::DirectedLadder if i == 1 => id(0),
            Shape::DirectedLadder => id(i - 2),
            Shape::CombOfColumns => Some(match CombVertex::from_id(v) {
                CombVertex::Bottom(k) => CombVertex::Bottom(k - 1).id(),
                CombVertex::Column(k, 1) => CombVertex::Bottom(k).id(),
                CombVertex::Column(k, j) => CombVertex::Column(k, j - 1).id(),
            }),
            Shape::ApexNecklace => id(i - 1),
            Shape::TransitiveOmega | Shape::InfiniteStar => id(0),
            Shape::Finite { parent, .. } => parent.get(&v).copied(),
        }
    }

    /// Human-readable vertex label.
    pub fn label(&self, v: VertexId) -> String {
        let i = v.index();
        match &self.shape {
            Shape::SymmetricRay => format!("v{i}"),
            Shape::DirectedLadder => format!("{}{}", if i.is_multiple_of(2) { 'a' } else { 'b' }, i / 2),
            Shape::CombOfColumns => match CombVertex::from_id(v) {
                CombVertex::Bottom(k) => format!("b{k}"),
                CombVertex::Column(k, j) => format!("v{k},{j}"),
            },
            Shape::ApexNecklace if i == 0 => "u".to_string(),
            Shape::ApexNecklace => format!("v{}", i - 1),
            Shape::Finite { d, .. } => d.label(v),
            _ => i.to_string(),
        }
    }
}

/// A named vertex predicate.
#[derive(Clone)]
pub struct VertexPredicate {
    name: String,
    test: Arc<dyn Fn(VertexId) -> bool + Send + Sync>,
}

impl VertexPredicate {
    pub fn new(name: impl Into<String>, f: impl Fn(VertexId) -> bool + Send + Sync + 'static) -> Self {
        VertexPredicate {
            name: name.into(),
            test: Arc::new(f),
        }
    }

    pub fn all() -> Self {
        Self::new("all", |_| true)
    }

    pub fn even() -> Self {
        Self::new("even", |v| v.0 % 2 == 0)
    }

    pub fn set(s: VertexSet) -> Self {
        let name = s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        Self::new(name, move |v| s.contains(&v))
    }

    /// `all`, `even`, or a comma-separated id list.
    pub fn parse(text: &str) -> Result<Self, LazyError> {
        match text.trim() {
            "all" => Ok(Self::all()),
            "even" => Ok(Self::even()),
            list => list
                .split(',')
                .map(|s| s.trim().parse::<u32>().map(VertexId))
                .collect::<Result<VertexSet, _>>()
                .map(Self::set)
                .map_err(|_| LazyError::BadParameters(format!("bad vertex predicate {text:?}"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn test(&self, v: VertexId) -> bool {
        (self.test)(v)
    }
}

impl fmt::Debug for VertexPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VertexPredicate({})", self.name)
    }
}
