//! The acceptance matrix. Each criterion returns a pass/fail line with the
//! counts behind it.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use arbor::arborescence::{
    is_normal, is_sensitive, level_partition, separation_check, sensitive_order_build, Normality,
    OrderOutcome,
};
use arbor::digraph::strong_components;
use arbor::horizon::{host_isolation, verify_horizon, HorizonContext, Reason, Verdict};
use arbor::jung::{comb_search, jung_build, CombSearch, WellOrderedTargets};
use arbor::lazy::{end_faithful_check, LazyFamily, TreePresentation, VertexPredicate};
use arbor::{Arborescence, Digraph, VertexId, VertexSet};

use crate::corpus::{corpus, random_digraph, random_reachable, rng, DEFAULT_SEED};
use crate::oracle::{self, TreeView};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} [{}] {} ({:.2}s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.seconds,
            self.detail
        )
    }
}

fn timed(id: u8, title: &'static str, body: impl FnOnce() -> (bool, String)) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = body();
    CriterionResult {
        id,
        title,
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn normal(d: &Digraph, t: &Arborescence) -> bool {
    is_normal(d, t).expect("tree lies in host").is_normal()
}

/// `is_normal` against all DFS runs, on every spanning arborescence from 0.
fn dfs_agreement(d: &Digraph) -> (usize, usize) {
    let runs = oracle::dfs_trees(d, VertexId(0));
    let mut checked = 0;
    let mut mismatches = 0;
    for t in oracle::spanning_arborescences(d, VertexId(0)) {
        checked += 1;
        if normal(d, &t) != runs.contains(&t.edges()) {
            mismatches += 1;
        }
    }
    (checked, mismatches)
}

pub fn dfs_equivalence(seed: u64) -> CriterionResult {
    timed(1, "DFS trees are exactly the normal spanning arborescences", || {
        let mut checked = 0;
        let mut mismatches = 0;
        for d in oracle::all_digraphs(4) {
            let (c, m) = dfs_agreement(&d);
            checked += c;
            mismatches += m;
        }
        let mut r = rng(seed);
        for _ in 0..500 {
            let p = r.gen_range(0.2..0.7);
            let d = random_digraph(&mut r, 5, p);
            let (c, m) = dfs_agreement(&d);
            checked += c;
            mismatches += m;
        }
        (
            mismatches == 0,
            format!("{checked} arborescences over 4096 + 500 digraphs, {mismatches} mismatches"),
        )
    })
}

pub fn sensitive_orders(seed: u64) -> CriterionResult {
    timed(2, "sensitive orders exist exactly for normal trees", || {
        let mut mismatches = 0;
        let mut built = 0;
        let mut instances = 0;
        for inst in corpus(seed) {
            instances += 1;
            let tv = TreeView::of(&inst.t);
            let tp = oracle::tpath_pairs(&inst.d, &tv);
            let exists = oracle::linear_extensions(&tv)
                .iter()
                .any(|o| oracle::is_sensitive(&tv, &tp, o));
            match sensitive_order_build(&inst.d, &inst.t).expect("tree lies in host") {
                OrderOutcome::Order(o) => {
                    built += 1;
                    let lib = is_sensitive(&inst.d, &inst.t, &o).expect("extension").is_sensitive();
                    if !exists || !lib || !oracle::is_sensitive(&tv, &tp, o.order()) {
                        mismatches += 1;
                    }
                }
                OrderOutcome::NotNormal { .. } => {
                    if exists {
                        mismatches += 1;
                    }
                }
            }
        }
        (
            mismatches == 0,
            format!("{instances} instances, {built} orders built, {mismatches} mismatches"),
        )
    })
}

pub fn separation(seed: u64) -> CriterionResult {
    timed(3, "meet chains separate incomparable pairs", || {
        let mut pairs = 0;
        let mut counterexamples = 0;
        let mut disagreements = 0;
        for inst in corpus(seed) {
            let tv = TreeView::of(&inst.t);
            if !oracle::is_normal(&inst.d, &tv) {
                continue;
            }
            let h = oracle::assistant_edges(&inst.d, &tv);
            let reach = oracle::closure(&tv.vertices, &h);
            for &v in &tv.vertices {
                for &w in &tv.vertices {
                    if v == w || !tv.incomparable(v, w) {
                        continue;
                    }
                    let x: VertexSet =
                        tv.ancestors(v).intersection(&tv.ancestors(w)).copied().collect();
                    let branch = tv
                        .ancestors(w)
                        .difference(&x)
                        .copied()
                        .min_by_key(|&b| tv.depth(b))
                        .expect("w lies outside the meet chain");
                    if reach[&branch].contains(&v) {
                        if separation_check(&inst.d, &inst.t, v, w).is_ok() {
                            disagreements += 1;
                        }
                        continue;
                    }
                    pairs += 1;
                    let found = !oracle::simple_paths(&inst.d, w, v, &x, 1).is_empty();
                    if found {
                        counterexamples += 1;
                    }
                    let lib = separation_check(&inst.d, &inst.t, v, w).map(|s| s.holds());
                    if lib != Ok(!found) {
                        disagreements += 1;
                    }
                }
            }
        }
        (
            counterexamples == 0 && disagreements == 0,
            format!(
                "{pairs} pairs, {counterexamples} avoiding paths, {disagreements} disagreements"
            ),
        )
    })
}

pub fn cycle_normalization(seed: u64) -> CriterionResult {
    timed(4, "cycle certificates have incomparable neighbours", || {
        let mut total = 0;
        let mut valid = 0;
        for inst in corpus(seed) {
            let Normality::NotNormal(cert) = is_normal(&inst.d, &inst.t).expect("tree lies in host")
            else {
                continue;
            };
            total += 1;
            let tv = TreeView::of(&inst.t);
            let h = oracle::assistant_edges(&inst.d, &tv);
            let c = &cert.vertices;
            let distinct = c.iter().collect::<BTreeSet<_>>().len() == c.len();
            let ok = cert.normalized
                && c.len() >= 2
                && distinct
                && oracle::cycle_steps(c).all(|(a, b)| h.contains(&(a, b)) && tv.incomparable(a, b));
            if ok {
                valid += 1;
            }
        }
        (
            total > 0 && valid == total,
            format!("{valid}/{total} certificates valid"),
        )
    })
}

pub fn acyclic_levels(seed: u64) -> CriterionResult {
    timed(5, "levels of normal spanning trees are acyclic", || {
        let mut trees = 0;
        let mut violations = 0;
        for inst in corpus(seed) {
            if inst.t.len() != inst.d.vertex_count() || !normal(&inst.d, &inst.t) {
                continue;
            }
            trees += 1;
            let report = level_partition(&inst.d, &inst.t).expect("normal input");
            let brute = oracle::levels(&TreeView::of(&inst.t)).iter().all(|l| {
                let e: BTreeSet<_> = inst.d.induced(l).edges().collect();
                !oracle::has_cycle(l, &e)
            });
            if !report.all_acyclic || !brute {
                violations += 1;
            }
        }
        (
            trees > 0 && violations == 0,
            format!("{trees} normal spanning trees, {violations} violations"),
        )
    })
}

pub fn jung_construction(seed: u64) -> CriterionResult {
    timed(6, "targeted construction yields normal arborescences", || {
        let mut r = rng(seed ^ 0x6a75_6e67);
        let mut failures = 0;
        for _ in 0..1000 {
            let n = r.gen_range(1..=12);
            let p = r.gen_range(0.1..0.5);
            let d = random_reachable(&mut r, n, p);
            let mut u: Vec<VertexId> = d.vertices().filter(|_| r.gen_bool(0.5)).collect();
            u.shuffle(&mut r);
            let ok = jung_build(&d, VertexId(0), &WellOrderedTargets::new(u.clone())).is_ok_and(|out| {
                let tv = TreeView::of(&out.tree);
                out.tree.root() == VertexId(0)
                    && u.iter().all(|x| tv.vertices.contains(x))
                    && oracle::is_normal(&d, &tv)
            });
            if !ok {
                failures += 1;
            }
        }
        let mut paths = 0;
        for n in 1..=6u32 {
            let d = Digraph::complete_symmetric(n);
            let all: Vec<VertexId> = d.vertices().collect();
            let ok = jung_build(&d, VertexId(0), &WellOrderedTargets::new(all)).is_ok_and(|out| {
                let tv = TreeView::of(&out.tree);
                tv.vertices.len() == n as usize && tv.is_path_from_root()
            });
            if ok {
                paths += 1;
            } else {
                failures += 1;
            }
        }
        (
            failures == 0,
            format!("1000 random hosts, {paths}/6 complete digraphs give paths, {failures} failures"),
        )
    })
}

pub fn end_faithfulness() -> CriterionResult {
    timed(7, "one normal ray per end at depth 50", || {
        let mut parts = Vec::new();
        let mut ok = true;
        for f in [LazyFamily::directed_ladder(), LazyFamily::comb_of_columns()] {
            let r = end_faithful_check(&f, &TreePresentation::Canonical, &VertexPredicate::all(), 50)
                .expect("canonical trees are normal");
            let oracle_ends = f.ends(50).len();
            ok &= r.ok && r.traced == oracle_ends && r.ends_in_closure == oracle_ends
                && r.ambiguous_events == 0;
            parts.push(format!(
                "{}: {}/{} traced, {} ambiguous",
                f.name(),
                r.traced,
                oracle_ends,
                r.ambiguous_events
            ));
        }
        (ok, parts.join("; "))
    })
}

pub fn ladder_reflects() -> CriterionResult {
    timed(8, "ladder tree reflects the horizon at depth 20", || {
        let f = LazyFamily::directed_ladder();
        let r = verify_horizon(&f, &TreePresentation::Canonical, 20).expect("canonical tree");
        let reflects = r.verdict == Verdict::Reflects { depth: 20 };
        let maps = r.maps.zeta_bijective() && r.maps.psi_bijective();
        let ctx = HorizonContext::new(&f, &TreePresentation::Canonical, 20).unwrap();
        // every separator splitting the two ends must carry a rung witness
        let (la, lb) = (ctx.host.end_labels(0).unwrap(), ctx.host.end_labels(1).unwrap());
        let separating: Vec<usize> = (0..=20).filter(|&n| la[n] != lb[n]).collect();
        let host_arc = r.host.arc(0, 1).is_some_and(|a| {
            a.witnesses.iter().map(|w| w.n).collect::<Vec<_>>() == separating
                && a.witnesses.iter().all(|w| {
                    let (x, y) = w.edge;
                    x.0 % 2 == 0 && y.0 == x.0 + 1 && ctx.host.trunc.window().has_edge(x, y)
                })
        });
        let bar_arc = r.assistant.arc(0, 1).is_some_and(|a| !a.witnesses.is_empty());
        let no_back = !r.host.has_arc(1, 0) && !r.assistant.has_arc(1, 0);
        let witnesses = r.witnesses.iter().filter(|w| w.n <= 10 && w.ok).count();
        let ok = reflects && maps && host_arc && bar_arc && no_back && witnesses == 22;
        (
            ok,
            format!(
                "verdict reflects={reflects}, maps bijective={maps}, a->b arc host={host_arc} tree={bar_arc}, \
                 b->a absent={no_back}, witnesses {witnesses}/22"
            ),
        )
    })
}

pub fn comb_counterexample() -> CriterionResult {
    timed(9, "comb tree does not reflect the horizon", || {
        let f = LazyFamily::comb_of_columns();
        let r = verify_horizon(&f, &TreePresentation::Canonical, 20).expect("canonical tree");
        let psi = r
            .verdict
            .has(|x| matches!(x, Reason::PsiNotSurjective { missing } if missing.len() == 1));
        let iso = host_isolation(&f, 20).expect("canonical tree");
        let ctx = HorizonContext::new(&f, &TreePresentation::Canonical, 20).unwrap();
        let window = ctx.host.trunc.window();
        let tails: Vec<VertexId> = (0..f.ends(20).len())
            .map(|e| f.ray(e, 20).expect("end ray"))
            .collect();
        let brute_isolated = tails.iter().enumerate().all(|(i, &a)| {
            tails[i + 1..]
                .iter()
                .all(|&b| !oracle::strongly_connected(window, a, b, &VertexSet::new()))
        });
        let counts: Vec<usize> = [5, 10, 15, 20]
            .iter()
            .map(|&d| {
                HorizonContext::new(&f, &TreePresentation::Canonical, d)
                    .and_then(|c| c.accumulation())
                    .map_or(0, |a| a.first().map_or(0, |x| x.count))
            })
            .collect();
        let increasing = counts.windows(2).all(|w| w[0] < w[1]) && counts[0] > 0;
        let ok = psi && iso.isolated && brute_isolated && increasing;
        (
            ok,
            format!(
                "psi not surjective={psi}, isolated={} (brute {brute_isolated}), shared counts {counts:?}",
                iso.isolated
            ),
        )
    })
}

pub fn transitive_tournament() -> CriterionResult {
    timed(10, "transitive tournaments: normal star beside long combs", || {
        let mut star_normal = 0;
        let mut combs = 0;
        let mut failures = 0;
        for n in 1..=30u32 {
            let edges: Vec<(u32, u32)> =
                (0..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
            let d = Digraph::on_range(n + 1, &edges).unwrap();
            let star = Arborescence::from_raw(0, &(1..=n).map(|j| (0, j)).collect::<Vec<_>>()).unwrap();
            if normal(&d, &star) && (n > 7 || oracle::is_normal(&d, &TreeView::of(&star))) {
                star_normal += 1;
            } else {
                failures += 1;
            }
            let u = d.vertex_set();
            for k in 1..=10usize.min(n as usize + 1) {
                match comb_search(&d, &u, k) {
                    CombSearch::Found(c) => {
                        let paths: Vec<Vec<VertexId>> =
                            c.paths.iter().map(|p| p.vertices().to_vec()).collect();
                        if c.paths.len() == k && oracle::is_comb(&d, c.spine.vertices(), &paths, &u) {
                            combs += 1;
                        } else {
                            failures += 1;
                        }
                    }
                    CombSearch::NotFound => failures += 1,
                }
            }
        }
        (
            failures == 0,
            format!("{star_normal}/30 stars normal, {combs} combs found, {failures} failures"),
        )
    })
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    vec![
        dfs_equivalence(seed),
        sensitive_orders(seed),
        separation(seed),
        cycle_normalization(seed),
        acyclic_levels(seed),
        jung_construction(seed),
        end_faithfulness(),
        ladder_reflects(),
        comb_counterexample(),
        transitive_tournament(),
    ]
}

pub fn run_default() -> Vec<CriterionResult> {
    run_all(DEFAULT_SEED)
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheck {
    pub seed: u64,
    pub instances: usize,
    pub normality_mismatches: usize,
    pub dfs_mismatches: usize,
    pub scc_mismatches: usize,
    pub ok: bool,
}

/// Random small instances checked against the brute-force oracles.
pub fn cross_check(seed: u64, count: usize) -> CrossCheck {
    let mut r = rng(seed);
    let mut normality = 0;
    let mut dfs = 0;
    let mut scc = 0;
    for _ in 0..count {
        let n = r.gen_range(1..=5);
        let p = r.gen_range(0.2..0.6);
        let d = random_reachable(&mut r, n, p);
        let t = crate::corpus::random_tree(&mut r, &d, n as usize);
        let tv = TreeView::of(&t);
        if normal(&d, &t) != oracle::is_normal(&d, &tv) {
            normality += 1;
        }
        let runs = oracle::dfs_trees(&d, VertexId(0));
        if t.len() == n as usize && normal(&d, &t) != runs.contains(&t.edges()) {
            dfs += 1;
        }
        let x: VertexSet = d.vertices().filter(|_| r.gen_bool(0.3)).collect();
        let part = strong_components(&d, &x);
        let rest: Vec<VertexId> = d.vertices().filter(|v| !x.contains(v)).collect();
        for &a in &rest {
            for &b in &rest {
                if part.same(a, b) != oracle::strongly_connected(&d, a, b, &x) {
                    scc += 1;
                }
            }
        }
    }
    CrossCheck {
        seed,
        instances: count,
        normality_mismatches: normality,
        dfs_mismatches: dfs,
        scc_mismatches: scc,
        ok: normality + dfs + scc == 0,
    }
}
