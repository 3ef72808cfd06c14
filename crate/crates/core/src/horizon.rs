//! Horizons at truncation depth: the ends of a lazy family and the limit
//! edges between them, compared against the ends of a solidified normal
//! assistant of a window tree.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::arborescence::{Arborescence, NormalAssistant};
use crate::digraph::{strong_components, Digraph, Edge, SccPartition, VertexId, VertexSet};
use crate::lazy::{tail, tail_label, HostView, LazyError, LazyFamily, RayTrace, TreePresentation};

/// `g` together with the reverse of every edge of `t`.
pub fn solidify(g: &Digraph, t: &Arborescence) -> Digraph {
    let vertices: VertexSet = g.vertices().chain(t.vertices()).collect();
    let edges: BTreeSet<Edge> = g
        .edges()
        .chain(t.edges().into_iter().flat_map(|(a, b)| [(a, b), (b, a)]))
        .collect();
    Digraph::new(vertices, edges).expect("edges join known distinct vertices")
}

/// Solidification of an assistant: only its tree edges are reversed.
pub fn solidify_assistant(h: &NormalAssistant) -> Digraph {
    solidify(h.digraph(), h.base())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Host,
    Assistant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Oracle,
    Detected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HorizonNode {
    pub id: usize,
    pub name: String,
    /// Frontier vertex of the thread; absent for host ends.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thread: Option<VertexId>,
}

/// An edge from `C(X_n, from)` to `C(X_n, to)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeparatorWitness {
    pub n: usize,
    pub edge: Edge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HorizonArc {
    pub from: usize,
    pub to: usize,
    pub witnesses: Vec<SeparatorWitness>,
}

/// A limit edge from a vertex to an end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexArc {
    pub vertex: VertexId,
    pub end: usize,
    pub present: bool,
    pub witnesses: Vec<SeparatorWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HorizonGraph {
    pub side: Side,
    pub depth: usize,
    pub nodes: Vec<HorizonNode>,
    pub arcs: Vec<HorizonArc>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub vertex_arcs: Vec<VertexArc>,
    pub provenance: Provenance,
    /// Indices `n` of the separators `X_n` tested.
    pub separators: Vec<usize>,
}

impl HorizonGraph {
    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.arcs.iter().any(|a| a.from == from && a.to == to)
    }

    pub fn arc(&self, from: usize, to: usize) -> Option<&HorizonArc> {
        self.arcs.iter().find(|a| a.from == from && a.to == to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiEntry {
    pub end: usize,
    pub name: String,
    pub image: Option<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndMapTable {
    pub psi: Vec<PsiEntry>,
    /// Tree thread to the label of its component in `H̄ - X_d`.
    pub zeta: Vec<(VertexId, usize)>,
    pub tree_threads: Vec<VertexId>,
    pub assistant_threads: Vec<usize>,
    pub psi_total: bool,
    pub psi_injective: bool,
    pub psi_surjective: bool,
    pub zeta_injective: bool,
    pub zeta_surjective: bool,
}

impl EndMapTable {
    pub fn zeta_bijective(&self) -> bool {
        self.zeta_injective && self.zeta_surjective
    }

    pub fn psi_bijective(&self) -> bool {
        self.psi_total && self.psi_injective && self.psi_surjective
    }

    /// Tree threads outside the image of ψ.
    pub fn missing(&self) -> Vec<VertexId> {
        let image: VertexSet = self.psi.iter().filter_map(|p| p.image).collect();
        self.tree_threads
            .iter()
            .copied()
            .filter(|x| !image.contains(x))
            .collect()
    }
}

/// Host window, normal window tree and the solidified assistant `H̄`.
#[derive(Debug, Clone)]
pub struct HorizonContext {
    pub host: HostView,
    pub hbar: Digraph,
    pub hbar_tower: Vec<SccPartition>,
}

impl HorizonContext {
    pub fn new(f: &LazyFamily, t: &TreePresentation, d: usize) -> Result<Self, LazyError> {
        let host = HostView::new(f, d, t)?;
        let induced = host.trunc.window().induced(&host.tree.vertex_set());
        let h = NormalAssistant::build_plain(&induced, &host.tree)
            .map_err(|e| LazyError::BadParameters(format!("tree presentation: {e}")))?;
        let hbar = solidify_assistant(&h);
        let hbar_tower = (0..=host.depth())
            .map(|n| strong_components(&hbar, &host.trunc.separator(n)))
            .collect();
        Ok(HorizonContext {
            host,
            hbar,
            hbar_tower,
        })
    }

    pub fn family(&self) -> &LazyFamily {
        &self.host.family
    }

    pub fn depth(&self) -> usize {
        self.host.depth()
    }

    fn round(&self, v: VertexId) -> usize {
        self.host.trunc.round_of(v).expect("window vertex")
    }

    /// Components of `H̄ - X_d` meeting round `d` and a later round.
    pub fn assistant_threads(&self) -> Vec<usize> {
        let d = self.depth();
        let part = &self.hbar_tower[d];
        (0..part.len())
            .filter(|&l| {
                let c = part.component(l);
                c.iter().any(|&v| self.round(v) == d) && c.iter().any(|&v| self.round(v) > d)
            })
            .collect()
    }

    pub fn end_maps(&self) -> Result<EndMapTable, LazyError> {
        let d = self.depth();
        let f = self.family();
        let tree_threads = self.host.tree_threads();
        let mut psi = Vec::new();
        for e in f.ends(d) {
            let image = match self.host.trace(e.id)? {
                RayTrace::Traced { frontier, .. } => Some(frontier),
                _ => None,
            };
            psi.push(PsiEntry {
                end: e.id,
                name: e.name,
                image,
            });
        }
        let images: Vec<VertexId> = psi.iter().filter_map(|p| p.image).collect();
        let distinct: VertexSet = images.iter().copied().collect();
        let thread_set: VertexSet = tree_threads.iter().copied().collect();
        let part = &self.hbar_tower[d];
        let zeta: Vec<(VertexId, usize)> = tree_threads
            .iter()
            .map(|&x| (x, part.component_of(x).expect("frontier lies outside X_d")))
            .collect();
        let zeta_labels: BTreeSet<usize> = zeta.iter().map(|&(_, l)| l).collect();
        let assistant_threads = self.assistant_threads();
        Ok(EndMapTable {
            psi_total: images.len() == psi.len(),
            psi_injective: distinct.len() == images.len() && distinct.is_subset(&thread_set),
            psi_surjective: thread_set.is_subset(&distinct),
            zeta_injective: zeta_labels.len() == zeta.len(),
            zeta_surjective: assistant_threads.iter().all(|l| zeta_labels.contains(l))
                && zeta_labels.iter().all(|l| assistant_threads.contains(l)),
            psi,
            zeta,
            tree_threads,
            assistant_threads,
        })
    }

    /// Host horizon: oracle ends with arcs detected in the window.
    pub fn host_horizon(&self) -> Result<HorizonGraph, LazyError> {
        host_horizon_of(&self.host)
    }

    /// Horizon of `H̄`: one node per tree thread.
    pub fn assistant_horizon(&self) -> Result<HorizonGraph, LazyError> {
        let maps = self.end_maps()?;
        let preimage: BTreeMap<VertexId, &PsiEntry> = maps
            .psi
            .iter()
            .filter_map(|p| p.image.map(|x| (x, p)))
            .collect();
        let nodes: Vec<HorizonNode> = maps
            .tree_threads
            .iter()
            .enumerate()
            .map(|(i, &x)| HorizonNode {
                id: i,
                name: preimage.get(&x).map_or_else(
                    || format!("thread at {}", self.family().label(x)),
                    |p| format!("{}'", p.name),
                ),
                thread: Some(x),
            })
            .collect();
        let labels: Vec<Vec<Option<usize>>> = maps
            .tree_threads
            .iter()
            .map(|&x| self.hbar_tower.iter().map(|p| p.component_of(x)).collect())
            .collect();
        let arcs = detect_arcs(&self.hbar, &self.hbar_tower, &labels);
        Ok(HorizonGraph {
            side: Side::Assistant,
            depth: self.depth(),
            nodes,
            arcs,
            vertex_arcs: Vec::new(),
            provenance: Provenance::Detected,
            separators: (0..=self.depth()).collect(),
        })
    }

    fn host_component(&self, end: usize, x: &VertexSet) -> Result<VertexSet, LazyError> {
        let part = strong_components(self.host.trunc.window(), x);
        let t = tail(self.family(), &self.host.trunc, end);
        let l = tail_label(&part, &t, end, 0)?;
        Ok(part.component(l).iter().copied().collect())
    }

    fn assistant_component(&self, v: VertexId, x: &VertexSet) -> Option<VertexSet> {
        let part = strong_components(&self.hbar, x);
        part.component_of(v)
            .map(|l| part.component(l).iter().copied().collect())
    }

    fn traced_ray(&self, end: usize) -> Result<(Vec<VertexId>, VertexId), LazyError> {
        match self.host.trace(end)? {
            RayTrace::Traced { ray, frontier } => Ok((ray, frontier)),
            _ => Err(LazyError::NoWitnessInWindow),
        }
    }

    pub fn witness_forward(&self, end: usize, x: &VertexSet) -> Result<ForwardWitness, LazyError> {
        if !self.family().declared_solid() {
            return Err(LazyError::NotSolidFamily);
        }
        let c = self.host_component(end, x)?;
        let (ray, _) = self.traced_ray(end)?;
        let t = &self.host.tree;
        let v = ray
            .iter()
            .copied()
            .find(|&v| t.up_closure(v).is_subset(&c))
            .ok_or(LazyError::NoWitnessInWindow)?;
        let mut x_prime = t.down_closure(v);
        x_prime.remove(&v);
        let contained = self
            .assistant_component(v, &x_prime)
            .is_some_and(|cp| cp.is_subset(&c));
        Ok(ForwardWitness {
            end,
            x: x.iter().copied().collect(),
            v,
            x_prime: x_prime.into_iter().collect(),
            contained,
        })
    }

    pub fn witness_backward(
        &self,
        end: usize,
        x_prime: &VertexSet,
    ) -> Result<BackwardWitness, LazyError> {
        if !self.family().declared_solid() {
            return Err(LazyError::NotSolidFamily);
        }
        let (_, frontier) = self.traced_ray(end)?;
        let t = &self.host.tree;
        let inside: VertexSet = x_prime.iter().copied().filter(|v| t.contains(*v)).collect();
        let x = t.down_closure_of(&inside);
        let cp = self
            .assistant_component(frontier, x_prime)
            .ok_or(LazyError::NoWitnessInWindow)?;
        let c = self.host_component(end, &x)?;
        Ok(BackwardWitness {
            end,
            x_prime: x_prime.iter().copied().collect(),
            x: x.into_iter().collect(),
            contained: c.is_subset(&cp),
        })
    }

    pub fn correspondence(&self) -> Result<CorrespondenceReport, LazyError> {
        if !self.family().declared_solid() {
            return Err(LazyError::NotSolidFamily);
        }
        let host = self.host_horizon()?;
        let bar = self.assistant_horizon()?;
        let maps = self.end_maps()?;
        let node_of: BTreeMap<VertexId, usize> = bar
            .nodes
            .iter()
            .filter_map(|n| n.thread.map(|x| (x, n.id)))
            .collect();
        let image: BTreeMap<usize, usize> = maps
            .psi
            .iter()
            .filter_map(|p| p.image.and_then(|x| node_of.get(&x)).map(|&i| (p.end, i)))
            .collect();
        let mut pairs = Vec::new();
        for a in &host.nodes {
            for b in &host.nodes {
                if a.id == b.id {
                    continue;
                }
                let host_arc = host.arc(a.id, b.id);
                let bar_arc = match (image.get(&a.id), image.get(&b.id)) {
                    (Some(&i), Some(&j)) => bar.arc(i, j),
                    _ => None,
                };
                pairs.push(PairVerdict {
                    from: a.id,
                    to: b.id,
                    host: host_arc.is_some(),
                    assistant: bar_arc.is_some(),
                    agree: host_arc.is_some() == bar_arc.is_some(),
                    host_witnesses: host_arc.map(|a| a.witnesses.clone()).unwrap_or_default(),
                    assistant_witnesses: bar_arc.map(|a| a.witnesses.clone()).unwrap_or_default(),
                });
            }
        }
        Ok(CorrespondenceReport {
            depth: self.depth(),
            all_agree: pairs.iter().all(|p| p.agree),
            pairs,
        })
    }

    /// For each tree thread outside the image of ψ: the least number, over
    /// `n <= d/2`, of ψ-image threads sharing its component in `H̄ - X_n`.
    pub fn accumulation(&self) -> Result<Vec<Accumulation>, LazyError> {
        let maps = self.end_maps()?;
        let images: Vec<VertexId> = maps.psi.iter().filter_map(|p| p.image).collect();
        let d = self.depth();
        Ok(maps
            .missing()
            .into_iter()
            .map(|x| {
                let per_n: Vec<usize> = (0..=d / 2)
                    .map(|n| {
                        let part = &self.hbar_tower[n];
                        images.iter().filter(|&&y| part.same(x, y)).count()
                    })
                    .collect();
                Accumulation {
                    thread: x,
                    depth: d,
                    count: per_n.iter().copied().min().unwrap_or(0),
                    per_separator: per_n,
                }
            })
            .collect())
    }
}

fn host_horizon_of(host: &HostView) -> Result<HorizonGraph, LazyError> {
    let f = &host.family;
    let d = host.depth();
    let ends = f.ends(d);
    let labels: Vec<Vec<Option<usize>>> = ends
        .iter()
        .map(|e| Ok(host.end_labels(e.id)?.into_iter().map(Some).collect()))
        .collect::<Result<_, LazyError>>()?;
    let arcs = detect_arcs(host.trunc.window(), &host.tower, &labels);
    let nodes = ends
        .into_iter()
        .map(|e| HorizonNode {
            id: e.id,
            name: e.name,
            thread: None,
        })
        .collect();
    let mut vertex_arcs = Vec::new();
    for (v, end) in f.limit_edges().vertex_end {
        let Some(rv) = host.trunc.round_of(v) else { continue };
        let t = tail(f, &host.trunc, end);
        let mut witnesses = Vec::new();
        let mut present = true;
        for n in rv + 1..=d {
            let mut x = host.trunc.separator(n);
            x.remove(&v);
            let part = strong_components(host.trunc.window(), &x);
            let l = tail_label(&part, &t, end, n)?;
            match part
                .component(l)
                .iter()
                .copied()
                .find(|&y| host.trunc.window().has_edge(v, y))
            {
                Some(y) => witnesses.push(SeparatorWitness { n, edge: (v, y) }),
                None => present = false,
            }
        }
        vertex_arcs.push(VertexArc {
            vertex: v,
            end,
            present,
            witnesses,
        });
    }
    Ok(HorizonGraph {
        side: Side::Host,
        depth: d,
        nodes,
        arcs,
        vertex_arcs,
        provenance: if f.ends(d).is_empty() {
            Provenance::Oracle
        } else {
            Provenance::Detected
        },
        separators: (0..=d).collect(),
    })
}

/// Arc `(i, j)` when the two nodes are separated by some `X_n` and every
/// separating `X_n` has an edge from the component of `i` to that of `j`.
fn detect_arcs(
    g: &Digraph,
    tower: &[SccPartition],
    labels: &[Vec<Option<usize>>],
) -> Vec<HorizonArc> {
    let bundles: Vec<BTreeMap<(usize, usize), Edge>> = tower
        .iter()
        .map(|part| {
            let mut m = BTreeMap::new();
            for (a, b) in g.edges() {
                if let (Some(la), Some(lb)) = (part.component_of(a), part.component_of(b)) {
                    if la != lb {
                        m.entry((la, lb)).or_insert((a, b));
                    }
                }
            }
            m
        })
        .collect();
    let mut arcs = Vec::new();
    for (i, li) in labels.iter().enumerate() {
        for (j, lj) in labels.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut witnesses = Vec::new();
            let mut ok = true;
            for (n, bundle) in bundles.iter().enumerate() {
                let (Some(a), Some(b)) = (li[n], lj[n]) else { continue };
                if a == b {
                    continue;
                }
                match bundle.get(&(a, b)) {
                    Some(&edge) => witnesses.push(SeparatorWitness { n, edge }),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && !witnesses.is_empty() {
                arcs.push(HorizonArc {
                    from: i,
                    to: j,
                    witnesses,
                });
            }
        }
    }
    arcs
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForwardWitness {
    pub end: usize,
    pub x: Vec<VertexId>,
    pub v: VertexId,
    pub x_prime: Vec<VertexId>,
    pub contained: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BackwardWitness {
    pub end: usize,
    pub x_prime: Vec<VertexId>,
    pub x: Vec<VertexId>,
    pub contained: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub from: usize,
    pub to: usize,
    pub host: bool,
    pub assistant: bool,
    pub agree: bool,
    pub host_witnesses: Vec<SeparatorWitness>,
    pub assistant_witnesses: Vec<SeparatorWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    pub depth: usize,
    pub pairs: Vec<PairVerdict>,
    pub all_agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Accumulation {
    pub thread: VertexId,
    pub depth: usize,
    pub count: usize,
    pub per_separator: Vec<usize>,
}

/// Every oracle end in its own strong component of the window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsolationReport {
    pub depth: usize,
    pub labels: Vec<(usize, usize)>,
    pub isolated: bool,
}

pub fn host_isolation(f: &LazyFamily, d: usize) -> Result<IsolationReport, LazyError> {
    let view = HostView::new(f, d, &TreePresentation::Canonical)?;
    let labels: Vec<(usize, usize)> = f
        .ends(view.depth())
        .iter()
        .map(|e| Ok((e.id, view.end_labels(e.id)?[0])))
        .collect::<Result<_, LazyError>>()?;
    let distinct: BTreeSet<usize> = labels.iter().map(|&(_, l)| l).collect();
    Ok(IsolationReport {
        depth: view.depth(),
        isolated: distinct.len() == labels.len(),
        labels,
    })
}

/// Host horizon, or the `H̄` horizon when a tree presentation is given.
pub fn horizon_graph(
    f: &LazyFamily,
    t: Option<&TreePresentation>,
    d: usize,
) -> Result<HorizonGraph, LazyError> {
    match t {
        Some(t) => HorizonContext::new(f, t, d)?.assistant_horizon(),
        None => host_horizon_of(&HostView::new(f, d, &TreePresentation::Canonical)?),
    }
}

pub fn horizon_witness_forward(
    f: &LazyFamily,
    t: &TreePresentation,
    end: usize,
    x: &VertexSet,
    d: usize,
) -> Result<ForwardWitness, LazyError> {
    HorizonContext::new(f, t, d)?.witness_forward(end, x)
}

pub fn horizon_witness_backward(
    f: &LazyFamily,
    t: &TreePresentation,
    end: usize,
    x_prime: &VertexSet,
    d: usize,
) -> Result<BackwardWitness, LazyError> {
    HorizonContext::new(f, t, d)?.witness_backward(end, x_prime)
}

pub fn limit_edge_correspondence(
    f: &LazyFamily,
    t: &TreePresentation,
    d: usize,
) -> Result<CorrespondenceReport, LazyError> {
    if !f.declared_solid() {
        return Err(LazyError::NotSolidFamily);
    }
    HorizonContext::new(f, t, d)?.correspondence()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Reason {
    PsiNotTotal { ends: Vec<usize> },
    PsiNotInjective,
    PsiNotSurjective { missing: Vec<VertexId> },
    ZetaNotBijective,
    LimitEdgeMismatch { pairs: Vec<(usize, usize)> },
    WitnessFailed { end: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Reflects { depth: usize },
    CounterExample { reasons: Vec<Reason> },
}

impl Verdict {
    pub fn reflects(&self) -> bool {
        matches!(self, Verdict::Reflects { .. })
    }

    pub fn has(&self, pred: impl Fn(&Reason) -> bool) -> bool {
        match self {
            Verdict::Reflects { .. } => false,
            Verdict::CounterExample { reasons } => reasons.iter().any(pred),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessRecord {
    pub end: usize,
    pub n: usize,
    pub forward: Option<ForwardWitness>,
    pub backward: Option<BackwardWitness>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HorizonReport {
    pub family: String,
    pub depth: usize,
    pub verdict: Verdict,
    pub maps: EndMapTable,
    pub host: HorizonGraph,
    pub assistant: HorizonGraph,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correspondence: Option<CorrespondenceReport>,
    pub witnesses: Vec<WitnessRecord>,
    pub accumulation: Vec<Accumulation>,
}

/// Checks at depth `d` that `t` reflects the horizon of `f`.
pub fn verify_horizon(
    f: &LazyFamily,
    t: &TreePresentation,
    d: usize,
) -> Result<HorizonReport, LazyError> {
    let ctx = HorizonContext::new(f, t, d)?;
    let d = ctx.depth();
    let maps = ctx.end_maps()?;
    let host = ctx.host_horizon()?;
    let assistant = ctx.assistant_horizon()?;
    let mut reasons = Vec::new();
    if !maps.zeta_bijective() {
        reasons.push(Reason::ZetaNotBijective);
    }
    if !maps.psi_total {
        reasons.push(Reason::PsiNotTotal {
            ends: maps.psi.iter().filter(|p| p.image.is_none()).map(|p| p.end).collect(),
        });
    }
    if !maps.psi_injective {
        reasons.push(Reason::PsiNotInjective);
    }
    if !maps.psi_surjective {
        reasons.push(Reason::PsiNotSurjective {
            missing: maps.missing(),
        });
    }
    let mut correspondence = None;
    let mut witnesses = Vec::new();
    if f.declared_solid() {
        let c = ctx.correspondence()?;
        let bad: Vec<(usize, usize)> =
            c.pairs.iter().filter(|p| !p.agree).map(|p| (p.from, p.to)).collect();
        if !bad.is_empty() {
            reasons.push(Reason::LimitEdgeMismatch { pairs: bad });
        }
        correspondence = Some(c);
        for p in maps.psi.iter().filter(|p| p.image.is_some()) {
            for n in 0..=d / 2 {
                let x = ctx.host.trunc.separator(n);
                let forward = ctx.witness_forward(p.end, &x).ok();
                let backward = forward.as_ref().and_then(|fw| {
                    let xp: VertexSet = fw.x_prime.iter().copied().collect();
                    ctx.witness_backward(p.end, &xp).ok()
                });
                let ok = forward.as_ref().is_some_and(|w| w.contained)
                    && backward.as_ref().is_some_and(|w| w.contained);
                if !ok {
                    reasons.push(Reason::WitnessFailed { end: p.end, n });
                }
                witnesses.push(WitnessRecord {
                    end: p.end,
                    n,
                    forward,
                    backward,
                    ok,
                });
            }
        }
    }
    let accumulation = ctx.accumulation()?;
    let verdict = if reasons.is_empty() {
        Verdict::Reflects { depth: d }
    } else {
        Verdict::CounterExample { reasons }
    };
    Ok(HorizonReport {
        family: f.name().to_string(),
        depth: d,
        verdict,
        maps,
        host,
        assistant,
        correspondence,
        witnesses,
        accumulation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::vset;

    fn canon() -> TreePresentation {
        TreePresentation::Canonical
    }

    #[test]
    fn solidify_chain() {
        let g = Digraph::on_range(3, &[(0, 1), (1, 2)]).unwrap();
        let t = Arborescence::new(VertexId(0), [(VertexId(0), VertexId(1)), (VertexId(1), VertexId(2))])
            .unwrap();
        let s = solidify(&g, &t);
        assert!(s.has_edge(VertexId(1), VertexId(0)) && s.has_edge(VertexId(2), VertexId(1)));
        assert_eq!(s.edge_count(), 4);
        assert_eq!(solidify(&s, &t), s);
    }

    #[test]
    fn ladder_reflects() {
        let r = verify_horizon(&LazyFamily::directed_ladder(), &canon(), 20).unwrap();
        assert_eq!(r.verdict, Verdict::Reflects { depth: 20 }, "{:?}", r.verdict);
        assert!(r.host.has_arc(0, 1) && !r.host.has_arc(1, 0));
        assert!(r.assistant.has_arc(0, 1) && !r.assistant.has_arc(1, 0));
        assert_eq!(r.host.arc(0, 1).unwrap().witnesses.len(), 21);
        assert_eq!(r.witnesses.len(), 22);
        assert!(r.accumulation.is_empty());
    }

    #[test]
    fn comb_is_a_counterexample() {
        let r = verify_horizon(&LazyFamily::comb_of_columns(), &canon(), 20).unwrap();
        assert!(r.verdict.has(|x| matches!(x, Reason::PsiNotSurjective { .. })));
        assert!(r.maps.zeta_bijective());
        assert_eq!(r.accumulation.len(), 1);
        assert!(host_isolation(&LazyFamily::comb_of_columns(), 20).unwrap().isolated);
    }

    #[test]
    fn comb_accumulation_grows() {
        let counts: Vec<usize> = [5, 10, 15, 20]
            .iter()
            .map(|&d| {
                let ctx = HorizonContext::new(&LazyFamily::comb_of_columns(), &canon(), d).unwrap();
                ctx.accumulation().unwrap()[0].count
            })
            .collect();
        assert_eq!(counts, vec![3, 5, 8, 10]);
    }

    #[test]
    fn single_end_families() {
        let r = verify_horizon(&LazyFamily::symmetric_ray(), &canon(), 10).unwrap();
        assert!(r.verdict.reflects(), "{:?}", r.verdict);
        assert_eq!(r.host.nodes.len(), 1);
        assert!(r.host.arcs.is_empty());
        let c = limit_edge_correspondence(&LazyFamily::symmetric_ray(), &canon(), 10).unwrap();
        assert!(c.all_agree && c.pairs.is_empty());
    }

    #[test]
    fn apex_vertex_edge_is_detected() {
        let g = horizon_graph(&LazyFamily::apex_necklace(), None, 8).unwrap();
        assert_eq!(g.vertex_arcs.len(), 1);
        assert!(g.vertex_arcs[0].present);
    }

    #[test]
    fn witnesses_on_the_ladder() {
        let f = LazyFamily::directed_ladder();
        let ctx = HorizonContext::new(&f, &canon(), 20).unwrap();
        let w = ctx.witness_forward(0, &ctx.host.trunc.separator(2)).unwrap();
        assert_eq!(w.v, VertexId(4));
        assert_eq!(w.x_prime, vec![VertexId(0), VertexId(2)]);
        assert!(w.contained);
        let b = ctx.witness_backward(0, &vset([6])).unwrap();
        assert_eq!(b.x, vec![VertexId(0), VertexId(2), VertexId(4), VertexId(6)]);
        assert!(b.contained);
        let e = ctx.witness_backward(0, &VertexSet::new()).unwrap();
        assert!(e.x.is_empty());
    }

    #[test]
    fn non_solid_witnesses_are_refused() {
        let f = LazyFamily::comb_of_columns();
        assert_eq!(
            horizon_witness_forward(&f, &canon(), 0, &VertexSet::new(), 6),
            Err(LazyError::NotSolidFamily)
        );
        assert_eq!(
            limit_edge_correspondence(&f, &canon(), 6),
            Err(LazyError::NotSolidFamily)
        );
    }
}
