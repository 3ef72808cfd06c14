use std::collections::BTreeSet;

use proptest::prelude::*;

use arbor::arborescence::{
    dfs_build, is_dfs_tree, is_normal, is_sensitive, level_partition, load_arborescence,
    normal_assistant, sensitive_order_build, separation_check, Normality, OrderOutcome, Priority,
};
use arbor::digraph::{load_digraph, reverse, strong_components};
use arbor::horizon::solidify;
use arbor::jung::{jung_build, WellOrderedTargets};
use arbor::{Arborescence, ArborError, Digraph, VertexId, VertexSet};

fn digraph(n: u32) -> impl Strategy<Value = Digraph> {
    prop::collection::vec(any::<bool>(), (n * n) as usize).prop_map(move |bits| {
        let edges: Vec<(u32, u32)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .zip(bits)
            .filter(|&((a, b), keep)| keep && a != b)
            .map(|(e, _)| e)
            .collect();
        Digraph::on_range(n, &edges).unwrap()
    })
}

fn any_digraph() -> impl Strategy<Value = Digraph> {
    (1u32..=7).prop_flat_map(digraph)
}

/// A spanning tree on `0..n` with `parent(i) < i`, inside a host that
/// contains its edges plus random extras.
fn host_and_tree() -> impl Strategy<Value = (Digraph, Arborescence)> {
    (2u32..=7).prop_flat_map(|n| {
        let parents: Vec<_> = (1..n).map(|i| 0..i).collect();
        (digraph(n), parents).prop_map(|(d, parents)| {
            let tree: Vec<(u32, u32)> =
                parents.iter().enumerate().map(|(i, &p)| (p, i as u32 + 1)).collect();
            let t = Arborescence::from_raw(0, &tree).unwrap();
            let d = d
                .union_edges(tree.iter().map(|&(a, b)| (VertexId(a), VertexId(b))))
                .unwrap();
            (d, t)
        })
    })
}

fn with_priority() -> impl Strategy<Value = (Digraph, Priority)> {
    any_digraph().prop_flat_map(|d| {
        let vs: Vec<VertexId> = d.vertices().collect();
        (Just(d), Just(vs).prop_shuffle()).prop_map(|(d, vs)| (d, Priority::new(vs)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reverse_is_an_involution(d in any_digraph()) {
        prop_assert_eq!(reverse(&reverse(&d)), d.clone());
        prop_assert_eq!(reverse(&d).edge_count(), d.edge_count());
    }

    #[test]
    fn documents_round_trip((d, t) in host_and_tree()) {
        prop_assert_eq!(load_digraph(&d.to_json()).unwrap(), d);
        prop_assert_eq!(load_arborescence(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn strong_components_match_mutual_reachability(d in any_digraph()) {
        let part = strong_components(&d, &VertexSet::new());
        for a in d.vertices() {
            for b in d.vertices() {
                let mutual = d.can_reach(a, b) && d.can_reach(b, a);
                prop_assert_eq!(part.same(a, b), mutual || a == b);
            }
        }
    }

    #[test]
    fn dfs_trees_are_normal((d, p) in with_priority()) {
        let t = dfs_build(&d, VertexId(0), &p).unwrap();
        prop_assert!(is_normal(&d, &t).unwrap().is_normal());
        let reach = d.reachable_from(&VertexSet::from([VertexId(0)]), &VertexSet::new());
        let host = d.induced(&reach);
        prop_assert!(is_dfs_tree(&host, &t).unwrap());
        prop_assert!(level_partition(&host, &t).unwrap().all_acyclic);
    }

    #[test]
    fn orders_exist_exactly_for_normal_trees((d, t) in host_and_tree()) {
        let normal = is_normal(&d, &t).unwrap().is_normal();
        match sensitive_order_build(&d, &t).unwrap() {
            OrderOutcome::Order(o) => {
                prop_assert!(normal);
                prop_assert!(is_sensitive(&d, &t, &o).unwrap().is_sensitive());
            }
            OrderOutcome::NotNormal { .. } => prop_assert!(!normal),
        }
    }

    #[test]
    fn certificates_are_incomparable_cycles_of_the_assistant((d, t) in host_and_tree()) {
        let h = normal_assistant(&d, &t).unwrap();
        if let Normality::NotNormal(c) = h.normality() {
            prop_assert!(c.normalized);
            for (a, b) in c.edges() {
                prop_assert!(h.has_edge(a, b));
                prop_assert!(!t.comparable(a, b));
            }
        }
        for (&(v, w), p) in h.witnesses() {
            prop_assert!(t.up_closure(v).contains(&p.first()));
            prop_assert!(t.up_closure(w).contains(&p.last()));
            prop_assert!(p.vertices().iter().all(|x| t.contains(*x)));
        }
    }

    #[test]
    fn meet_chains_separate_on_normal_trees((d, p) in with_priority()) {
        let t = dfs_build(&d, VertexId(0), &p).unwrap();
        for v in t.vertices() {
            for w in t.vertices() {
                if t.comparable(v, w) {
                    continue;
                }
                match separation_check(&d, &t, v, w) {
                    Ok(s) => prop_assert!(s.holds()),
                    Err(ArborError::PreconditionOrderViolated { .. }) => {}
                    Err(e) => prop_assert!(false, "{e}"),
                }
            }
        }
    }

    #[test]
    fn targeted_trees_cover_reachable_targets(
        d in any_digraph(),
        picks in prop::collection::vec(0u32..7, 0..6),
    ) {
        let reach = d.reachable_from(&VertexSet::from([VertexId(0)]), &VertexSet::new());
        let mut seen = BTreeSet::new();
        let targets: Vec<VertexId> = picks
            .into_iter()
            .map(VertexId)
            .filter(|v| reach.contains(v) && seen.insert(*v))
            .collect();
        let out = jung_build(&d, VertexId(0), &WellOrderedTargets::new(targets.clone())).unwrap();
        prop_assert!(targets.iter().all(|u| out.tree.contains(*u)));
        prop_assert!(is_normal(&d, &out.tree).unwrap().is_normal());
    }

    #[test]
    fn solidification_adds_reversed_tree_edges((d, t) in host_and_tree()) {
        let s = solidify(&d, &t);
        for (p, c) in t.edges() {
            prop_assert!(s.has_edge(p, c) && s.has_edge(c, p));
        }
        prop_assert!(d.edges().all(|(a, b)| s.has_edge(a, b)));
    }
}
