//! Graphviz output.

use std::fmt::Write;

use crate::arborescence::{Arborescence, NormalAssistant};
use crate::digraph::{Digraph, VertexSet};
use crate::horizon::HorizonGraph;
use crate::lazy::Truncation;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Plain digraph; separator vertices get a doubled border.
pub fn digraph_dot(d: &Digraph, separator: &VertexSet) -> String {
    let mut s = String::from("digraph G {\n");
    for v in d.vertices() {
        let border = if separator.contains(&v) { ", peripheries=2" } else { "" };
        let _ = writeln!(s, "  {} [label={}{border}];", v.0, quote(&d.label(v)));
    }
    for (a, b) in d.edges() {
        let _ = writeln!(s, "  {} -> {};", a.0, b.0);
    }
    s.push_str("}\n");
    s
}

/// Host digraph with tree edges solid and the rest dashed.
pub fn tree_dot(d: &Digraph, t: &Arborescence) -> String {
    let mut s = String::from("digraph T {\n");
    for v in d.vertices() {
        let shape = if v == t.root() { ", shape=doublecircle" } else { "" };
        let _ = writeln!(s, "  {} [label={}{shape}];", v.0, quote(&d.label(v)));
    }
    for (a, b) in d.edges() {
        let style = if t.is_tree_edge(a, b) { "solid" } else { "dashed" };
        let _ = writeln!(s, "  {} -> {} [style={style}];", a.0, b.0);
    }
    s.push_str("}\n");
    s
}

/// Assistant with added edges in red.
pub fn assistant_dot(h: &NormalAssistant) -> String {
    let mut s = String::from("digraph H {\n");
    for v in h.base().vertices() {
        let _ = writeln!(s, "  {};", v.0);
    }
    for (a, b) in h.base().edges() {
        let _ = writeln!(s, "  {} -> {} [style=solid];", a.0, b.0);
    }
    for &(a, b) in h.added() {
        let _ = writeln!(s, "  {} -> {} [color=red, style=dashed];", a.0, b.0);
    }
    s.push_str("}\n");
    s
}

/// Window grouped by round; boundary vertices drawn as boxes.
pub fn window_dot(w: &Truncation, label: impl Fn(crate::digraph::VertexId) -> String) -> String {
    let mut s = String::from("digraph W {\n  rankdir=LR;\n");
    for r in 0..w.rounds() {
        let _ = writeln!(s, "  subgraph cluster_{r} {{\n    label=\"round {r}\";");
        for v in w.in_rounds(r, r + 1) {
            let shape = if w.boundary().contains(&v) { "box" } else { "ellipse" };
            let _ = writeln!(s, "    {} [label={}, shape={shape}];", v.0, quote(&label(v)));
        }
        s.push_str("  }\n");
    }
    for (a, b) in w.window().edges() {
        let _ = writeln!(s, "  {} -> {};", a.0, b.0);
    }
    s.push_str("}\n");
    s
}

pub fn horizon_dot(g: &HorizonGraph) -> String {
    let mut s = String::from("digraph Horizon {\n");
    for n in &g.nodes {
        let _ = writeln!(s, "  e{} [label={}];", n.id, quote(&n.name));
    }
    for a in &g.arcs {
        let _ = writeln!(s, "  e{} -> e{} [label=\"{}\"];", a.from, a.to, a.witnesses.len());
    }
    for va in g.vertex_arcs.iter().filter(|va| va.present) {
        let _ = writeln!(s, "  v{0} [shape=point];\n  v{0} -> e{1};", va.vertex.0, va.end);
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::VertexId;
    use crate::horizon::horizon_graph;
    use crate::lazy::{truncate, LazyFamily};

    #[test]
    fn tree_edges_are_solid() {
        let d = Digraph::on_range(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let t = Arborescence::new(VertexId(0), [(VertexId(0), VertexId(1)), (VertexId(1), VertexId(2))])
            .unwrap();
        let s = tree_dot(&d, &t);
        assert!(s.contains("0 -> 1 [style=solid]"));
        assert!(s.contains("2 -> 0 [style=dashed]"));
    }

    #[test]
    fn horizon_and_window() {
        let f = LazyFamily::directed_ladder();
        let g = horizon_graph(&f, None, 6).unwrap();
        assert!(horizon_dot(&g).contains("e0 -> e1"));
        let w = window_dot(&truncate(&f, 2), |v| f.label(v));
        assert!(w.contains("cluster_0") && w.starts_with("digraph W"));
    }

    #[test]
    fn names_are_quoted() {
        let mut d = Digraph::on_range(1, &[]).unwrap();
        d.set_name(VertexId(0), "a\"b");
        assert!(digraph_dot(&d, &VertexSet::new()).contains(r#""a\"b""#));
    }
}
