//! JSON-in, JSON-out wrappers around `arbor` for the browser demo in `www/`.

use serde_json::json;
use wasm_bindgen::prelude::*;

use arbor::arborescence::{check_normal, dfs_build, load_arborescence, Priority};
use arbor::digraph::load_digraph;
use arbor::dot;
use arbor::horizon::verify_horizon;
use arbor::lazy::{FamilySpec, LazyFamily, TreePresentation};
use arbor::VertexId;

fn pretty(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("values serialize")
}

/// Normality verdict, added assistant edges and a DOT drawing of the assistant.
pub fn check_normal_json(digraph: &str, tree: &str) -> Result<String, String> {
    let d = load_digraph(digraph).map_err(|e| e.to_string())?;
    let t = load_arborescence(tree).map_err(|e| e.to_string())?;
    let (h, verdict) = check_normal(&d, &t).map_err(|e| e.to_string())?;
    Ok(pretty(json!({
        "normality": verdict,
        "added": h.added(),
        "dot": dot::assistant_dot(&h),
    })))
}

/// DFS tree from `root`; `priority` is a comma-separated list, highest first.
pub fn dfs_json(digraph: &str, root: u32, priority: &str) -> Result<String, String> {
    let d = load_digraph(digraph).map_err(|e| e.to_string())?;
    let order = priority
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u32>().map_err(|_| format!("bad priority entry {s:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    let t = dfs_build(&d, VertexId(root), &Priority::from_raw(&order)).map_err(|e| e.to_string())?;
    Ok(pretty(json!({
        "tree": t.to_document(),
        "dot": dot::tree_dot(&d, &t),
    })))
}

/// Horizon verdict of a catalog family's own tree at `depth`.
pub fn horizon_json(family: &str, depth: usize) -> Result<String, String> {
    let spec = FamilySpec {
        family: family.to_string(),
        params: Default::default(),
        depth: None,
    };
    let f = LazyFamily::from_spec(&spec).map_err(|e| e.to_string())?;
    let r = verify_horizon(&f, &TreePresentation::Canonical, depth).map_err(|e| e.to_string())?;
    Ok(pretty(json!({
        "verdict": r.verdict,
        "maps": r.maps,
        "dot": dot::horizon_dot(&r.host),
    })))
}

#[wasm_bindgen(js_name = checkNormal)]
pub fn check_normal_js(digraph: &str, tree: &str) -> Result<String, JsValue> {
    check_normal_json(digraph, tree).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = dfsTree)]
pub fn dfs_js(digraph: &str, root: u32, priority: &str) -> Result<String, JsValue> {
    dfs_json(digraph, root, priority).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = horizon)]
pub fn horizon_js(family: &str, depth: usize) -> Result<String, JsValue> {
    horizon_json(family, depth).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = familyNames)]
pub fn family_names() -> String {
    arbor::lazy::FAMILY_NAMES
        .iter()
        .filter(|n| **n != "finite")
        .copied()
        .collect::<Vec<_>>()
        .join(",")
}
