use arbor::horizon::{verify_horizon, Reason};
use arbor::jung::CombSearch;
use arbor::lazy::{
    closure_contains, comb_search_lazy, end_faithful_check, ends_approx, LazyFamily,
    TreePresentation, VertexPredicate, FAMILY_NAMES,
};

fn catalog() -> Vec<LazyFamily> {
    vec![
        LazyFamily::symmetric_ray(),
        LazyFamily::directed_ladder(),
        LazyFamily::comb_of_columns(),
        LazyFamily::apex_necklace(),
        LazyFamily::transitive_omega(),
        LazyFamily::infinite_star(),
    ]
}

#[test]
fn catalog_names_match() {
    for f in catalog() {
        assert!(FAMILY_NAMES.contains(&f.name()));
    }
}

#[test]
fn ladder_reflects_at_every_depth() {
    let f = LazyFamily::directed_ladder();
    for d in [6, 10, 16, 24] {
        let r = verify_horizon(&f, &TreePresentation::Canonical, d).unwrap();
        assert!(r.verdict.reflects(), "depth {d}: {:?}", r.verdict);
        assert!(r.maps.zeta_bijective() && r.maps.psi_bijective());
    }
}

#[test]
fn comb_fails_at_every_depth() {
    let f = LazyFamily::comb_of_columns();
    for d in [6, 10, 16] {
        let r = verify_horizon(&f, &TreePresentation::Canonical, d).unwrap();
        assert!(r.verdict.has(|x| matches!(x, Reason::PsiNotSurjective { .. })), "depth {d}");
    }
}

#[test]
fn ends_agree_with_the_oracle() {
    for f in [LazyFamily::symmetric_ray(), LazyFamily::directed_ladder()] {
        for d in 4..=12 {
            let r = ends_approx(&f, d).unwrap();
            assert!(r.agrees_with_oracle, "{} at depth {d}", f.name());
        }
    }
}

#[test]
fn closures_shrink_with_the_set() {
    let sets = ["all", "even", "0,1,2"];
    for f in catalog() {
        for e in f.ends(8) {
            let inside: Vec<bool> = sets
                .iter()
                .map(|s| closure_contains(&f, &VertexPredicate::parse(s).unwrap(), e.id, 8).unwrap())
                .collect();
            assert!(inside.windows(2).all(|w| w[0] >= w[1]), "{} end {}", f.name(), e.id);
            assert!(inside[0]);
        }
    }
}

#[test]
fn combs_persist_in_deeper_windows() {
    let f = LazyFamily::comb_of_columns();
    let all = VertexPredicate::all();
    let mut seen = false;
    for d in 2..=8 {
        let found = matches!(comb_search_lazy(&f, &all, 3, d), CombSearch::Found(_));
        assert!(found || !seen, "comb lost at depth {d}");
        seen |= found;
    }
    assert!(seen);
}

#[test]
fn faithful_on_solid_families() {
    for f in [LazyFamily::symmetric_ray(), LazyFamily::directed_ladder()] {
        let r = end_faithful_check(&f, &TreePresentation::Canonical, &VertexPredicate::all(), 16).unwrap();
        assert!(r.ok, "{}", f.name());
        assert_eq!(r.traced, r.ends_in_closure);
    }
}
