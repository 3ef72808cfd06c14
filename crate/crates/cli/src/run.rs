use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use arbor::arborescence::{
    check_normal, dfs_build, is_dfs_tree, is_normal, is_sensitive, level_partition,
    load_arborescence, sensitive_order_build, separation_check, LinearExtension, Normality,
    OrderOutcome, Priority, Separation,
};
use arbor::digraph::{load_digraph, vset};
use arbor::horizon::{
    horizon_witness_backward, horizon_witness_forward, solidify, verify_horizon,
};
use arbor::jung::{comb_search, jung_build, load_targets, reverse_jung_build, CombSearch};
use arbor::lazy::{
    closure_contains, end_faithful_check, ends_approx, necklace_prefix, solidity_check,
    star_comb, truncate, FamilySpec, LazyFamily, StarComb, TreePresentation, VertexPredicate,
};
use arbor::{dot, Arborescence, Digraph, VertexId};
use arbor_verify::corpus::DEFAULT_SEED;

use crate::args::{Cli, FamilyArgs, Format, HostTree, Verb};

const DEFAULT_DEPTH: usize = 20;

pub enum Doc {
    Json(Value),
    Text(String),
}

/// A document and whether it reports a negative verdict.
pub struct Outcome {
    pub doc: Doc,
    pub negative: bool,
}

impl Outcome {
    fn json<T: Serialize>(value: &T, negative: bool) -> Result<Self> {
        Ok(Outcome {
            doc: Doc::Json(serde_json::to_value(value)?),
            negative,
        })
    }

    fn text(s: String, negative: bool) -> Self {
        Outcome {
            doc: Doc::Text(s),
            negative,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn digraph(path: &Path) -> Result<Digraph> {
    load_digraph(&read(path)?).with_context(|| format!("loading digraph {}", path.display()))
}

fn tree(path: &Path) -> Result<Arborescence> {
    load_arborescence(&read(path)?).with_context(|| format!("loading tree {}", path.display()))
}

fn host_tree(io: &HostTree) -> Result<(Digraph, Arborescence)> {
    Ok((digraph(&io.digraph)?, tree(&io.tree)?))
}

/// `name` is either a family name or a path to a family spec document.
fn family(name: &str) -> Result<(LazyFamily, Option<usize>)> {
    let spec = if Path::new(name).is_file() {
        serde_json::from_str::<FamilySpec>(&read(Path::new(name))?)
            .with_context(|| format!("parsing family spec {name}"))?
    } else {
        FamilySpec {
            family: name.to_string(),
            params: Default::default(),
            depth: None,
        }
    };
    Ok((LazyFamily::from_spec(&spec)?, spec.depth))
}

struct Fam {
    f: LazyFamily,
    depth: usize,
    tree: TreePresentation,
}

fn fam(a: &FamilyArgs) -> Result<Fam> {
    let (f, spec_depth) = family(&a.family)?;
    let tree = match &a.tree {
        None => TreePresentation::Canonical,
        Some(p) => {
            let t = tree(p)?;
            let parent: BTreeMap<VertexId, VertexId> =
                t.edges().into_iter().map(|(p, c)| (c, p)).collect();
            TreePresentation::Explicit {
                root: t.root(),
                parent,
            }
        }
    };
    Ok(Fam {
        f,
        depth: a.depth.or(spec_depth).unwrap_or(DEFAULT_DEPTH),
        tree,
    })
}

fn ids(v: &[u32]) -> Vec<VertexId> {
    v.iter().map(|&x| VertexId(x)).collect()
}

fn seed(s: Option<u64>) -> u64 {
    s.unwrap_or(DEFAULT_SEED)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let dot_requested = cli.format == Some(Format::Dot);
    let dot_only = |s: String| Ok(Outcome::text(s, false));
    match &cli.verb {
        Verb::Assistant(io) => {
            let (d, t) = host_tree(io)?;
            let (h, verdict) = check_normal(&d, &t)?;
            if dot_requested {
                return dot_only(dot::assistant_dot(&h));
            }
            let witnesses: Vec<Value> = h
                .witnesses()
                .iter()
                .map(|(e, p)| json!({"edge": [e.0, e.1], "path": p}))
                .collect();
            Outcome::json(
                &json!({
                    "tree": t.to_document(),
                    "added": h.added().iter().collect::<Vec<_>>(),
                    "witnesses": witnesses,
                    "normality": verdict,
                }),
                false,
            )
        }
        Verb::CheckNormal(io) => {
            let (d, t) = host_tree(io)?;
            let verdict = is_normal(&d, &t)?;
            let negative = !verdict.is_normal();
            Outcome::json(&verdict, negative)
        }
        Verb::Order { io, order } => {
            let (d, t) = host_tree(io)?;
            match order {
                Some(o) => {
                    let ext = LinearExtension::from_raw(o)?;
                    let s = is_sensitive(&d, &t, &ext)?;
                    Outcome::json(&s, !s.is_sensitive())
                }
                None => {
                    let out = sensitive_order_build(&d, &t)?;
                    let negative = matches!(out, OrderOutcome::NotNormal { .. });
                    Outcome::json(&out, negative)
                }
            }
        }
        Verb::Dfs { digraph: p, root, priority } => {
            let d = digraph(p)?;
            let t = dfs_build(&d, VertexId(*root), &Priority::from_raw(priority))?;
            if dot_requested {
                return dot_only(dot::tree_dot(&d, &t));
            }
            Outcome::json(&t.to_document(), false)
        }
        Verb::IsDfs(io) => {
            let (d, t) = host_tree(io)?;
            let dfs = is_dfs_tree(&d, &t)?;
            Outcome::json(&json!({ "dfs_tree": dfs }), !dfs)
        }
        Verb::Separate { io, v, w } => {
            let (d, t) = host_tree(io)?;
            let s = separation_check(&d, &t, VertexId(*v), VertexId(*w))?;
            if dot_requested {
                let sep = match &s {
                    Separation::Holds { separator } | Separation::CounterPath { separator, .. } => {
                        separator
                    }
                };
                return dot_only(dot::digraph_dot(&d, sep));
            }
            Outcome::json(&s, !s.holds())
        }
        Verb::Levels(io) => {
            let (d, t) = host_tree(io)?;
            let r = level_partition(&d, &t)?;
            Outcome::json(&r, !r.all_acyclic)
        }
        Verb::Jung { digraph: p, root, targets, reverse } => {
            let d = digraph(p)?;
            let u = load_targets(&read(targets)?)?;
            if *reverse {
                let out = reverse_jung_build(&d, VertexId(*root), &u)?;
                return Outcome::json(
                    &json!({
                        "root": out.root(),
                        "edges": out.edges(),
                        "normal_in_reverse": out.is_normal_in(&d),
                    }),
                    false,
                );
            }
            let out = jung_build(&d, VertexId(*root), &u)?;
            if dot_requested {
                return dot_only(dot::tree_dot(&d, &out.tree));
            }
            Outcome::json(
                &json!({
                    "tree": out.tree.to_document(),
                    "order": out.order,
                    "attachments": out.attachments,
                }),
                false,
            )
        }
        Verb::Comb { digraph: p, family: fname, depth, set, k, star } => {
            let pred = VertexPredicate::parse(set)?;
            match (p, fname) {
                (Some(p), _) => {
                    let d = digraph(p)?;
                    let u = d.vertices().filter(|v| pred.test(*v)).collect();
                    let r = comb_search(&d, &u, *k);
                    let negative = matches!(r, CombSearch::NotFound);
                    Outcome::json(&r, negative)
                }
                (None, Some(name)) => {
                    let (f, _) = family(name)?;
                    if *star {
                        let r = star_comb(&f, &pred, *k, *depth)?;
                        let negative = matches!(r, StarComb::Exhausted { .. });
                        Outcome::json(&r, negative)
                    } else {
                        let r = arbor::lazy::comb_search_lazy(&f, &pred, *k, *depth);
                        let negative = matches!(r, CombSearch::NotFound);
                        Outcome::json(&r, negative)
                    }
                }
                (None, None) => bail!("comb needs --digraph or --family"),
            }
        }
        Verb::Ends(a) => {
            let x = fam(a)?;
            if dot_requested {
                let w = truncate(&x.f, x.depth);
                return dot_only(dot::window_dot(&w, |v| x.f.label(v)));
            }
            Outcome::json(&ends_approx(&x.f, x.depth)?, false)
        }
        Verb::Closure { fam: a, end, set } => {
            let x = fam(a)?;
            let pred = VertexPredicate::parse(set)?;
            let inside = closure_contains(&x.f, &pred, *end, x.depth)?;
            Outcome::json(
                &json!({"end": end, "set": pred.name(), "depth": x.depth, "in_closure": inside}),
                !inside,
            )
        }
        Verb::Faithful { fam: a, set } => {
            let x = fam(a)?;
            let pred = VertexPredicate::parse(set)?;
            let r = end_faithful_check(&x.f, &x.tree, &pred, x.depth)?;
            Outcome::json(&r, !r.ok)
        }
        Verb::Necklace { fam: a, end, k } => {
            let x = fam(a)?;
            Outcome::json(&necklace_prefix(&x.f, *end, *k, x.depth)?, false)
        }
        Verb::Solidify { digraph: p, tree: t, family: fname, depth } => match (p, t, fname) {
            (Some(p), Some(t), _) => {
                let d = digraph(p)?;
                let t = tree(t)?;
                t.check_in_host(&d)?;
                let s = solidify(&d, &t);
                if dot_requested {
                    return dot_only(dot::tree_dot(&s, &t));
                }
                Outcome::json(&s.to_document(), false)
            }
            (None, _, Some(name)) => {
                let (f, _) = family(name)?;
                let r = solidity_check(&f, *depth)?;
                Outcome::json(&r, !r.within_bound)
            }
            _ => bail!("solidify needs --digraph with --tree, or --family"),
        },
        Verb::Horizon(a) => {
            let x = fam(a)?;
            let r = verify_horizon(&x.f, &x.tree, x.depth)?;
            if dot_requested {
                return dot_only(dot::horizon_dot(&r.host));
            }
            Outcome::json(&r, !r.verdict.reflects())
        }
        Verb::Witness { fam: a, end, set, backward } => {
            let x = fam(a)?;
            let s = ids(set).into_iter().collect();
            if *backward {
                let r = horizon_witness_backward(&x.f, &x.tree, *end, &s, x.depth)?;
                Outcome::json(&r, !r.contained)
            } else {
                let r = horizon_witness_forward(&x.f, &x.tree, *end, &s, x.depth)?;
                Outcome::json(&r, !r.contained)
            }
        }
        Verb::Suite { seed: s } => {
            let results = arbor_verify::run_all(seed(*s));
            let negative = results.iter().any(|r| !r.passed);
            if cli.format == Some(Format::Json) {
                return Outcome::json(&results, negative);
            }
            let mut table: String = results.iter().map(|r| format!("{r}\n")).collect();
            let passed = results.iter().filter(|r| r.passed).count();
            table.push_str(&format!("{passed}/{} criteria passed\n", results.len()));
            Ok(Outcome::text(table, negative))
        }
        Verb::ExportDot { digraph: p, tree: t, separator, family: fname, depth } => {
            match (p, fname) {
                (Some(p), _) => {
                    let d = digraph(p)?;
                    match t {
                        Some(t) => dot_only(dot::tree_dot(&d, &tree(t)?)),
                        None => dot_only(dot::digraph_dot(&d, &vset(separator.iter().copied()))),
                    }
                }
                (None, Some(name)) => {
                    let (f, _) = family(name)?;
                    let w = truncate(&f, *depth);
                    dot_only(dot::window_dot(&w, |v| f.label(v)))
                }
                (None, None) => bail!("export-dot needs --digraph or --family"),
            }
        }
        Verb::Oracle { seed: s, count } => {
            let r = arbor_verify::cross_check(seed(*s), *count);
            Outcome::json(&r, !r.ok)
        }
    }
}

/// Structured certificate for errors that are really negative verdicts.
pub fn certificate(err: &anyhow::Error) -> Option<Value> {
    if let Some(arbor::ArborError::NotNormalInput(c)) = err.downcast_ref() {
        return Some(json!({"error": err.to_string(), "normality": Normality::NotNormal(c.clone())}));
    }
    if let Some(arbor::lazy::LazyError::NotNormalAtDepth { depth, certificate }) = err.downcast_ref()
    {
        return Some(json!({
            "error": err.to_string(),
            "depth": depth,
            "normality": Normality::NotNormal(certificate.clone()),
        }));
    }
    None
}
