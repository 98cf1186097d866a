use super::*;
use crate::logic::{parse_formula, Formula};
use crate::structures::{
    compute_type, enumerate_structures, isomorphic, Sort, Structure, EDGE,
};
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

fn gs_ab() -> Sort {
    Sort::graph(["a".to_string(), "b".to_string()])
}

#[test]
fn builtins_pass_validation() {
    let sort = gs_ab();
    let pg = Sort::ports(["p".to_string(), "q".to_string()]);
    let bigger = Sort::new(
        [("edge".to_string(), 2), ("u".to_string(), 1)],
        ["a".to_string(), "b".to_string()],
    )
    .unwrap();
    let schemes = [
        srcren(&sort, "a", "c").unwrap(),
        srcfg(&sort, "a").unwrap(),
        fus(&sort, "a", "b").unwrap(),
        fus(&bigger, "b", "a").unwrap(),
        inclusion(&sort, &bigger).unwrap(),
        add_ports(&pg, "p", "q").unwrap(),
        mdf(&pg, &[("p".to_string(), "r".to_string())]).unwrap(),
        ren_port(&pg, "p", "q2").unwrap(),
        fg_port(&pg, "p").unwrap(),
        mark("1").unwrap(),
    ];
    for s in schemes {
        assert!(
            validate_scheme(s.raw().clone()).is_ok(),
            "builtin failed validation: {:?}",
            s.raw()
        );
    }
}

#[test]
fn validation_rejects_double_resolution() {
    // two constants resolving the same output constant unconditionally
    let sort = gs_ab();
    let mut kappa = alloc::collections::BTreeMap::new();
    for d in ["a", "b"] {
        for c in ["a", "b"] {
            let f = if d == "a" {
                Formula::True
            } else if c == d {
                Formula::True
            } else {
                Formula::False
            };
            kappa.insert((c.to_string(), d.to_string()), f);
        }
    }
    let raw = RawScheme {
        input: sort.clone(),
        output: sort.clone(),
        delta: Formula::True,
        phi: [(EDGE.to_string(), parse_formula("(rel edge x1 x2)").unwrap())]
            .into_iter()
            .collect(),
        kappa,
    };
    match validate_scheme(raw) {
        Err(ViolationReport::Condition { condition, witness, .. }) => {
            assert!(condition.contains("uniqueness"), "{condition}");
            assert!(witness.is_source_separated());
        }
        other => panic!("expected a uniqueness violation, got {other:?}"),
    }
}

#[test]
fn validation_rejects_unguarded_phi() {
    // delta drops the a-element but edges may still mention it
    let sort = gs_ab();
    let raw = RawScheme {
        input: sort.clone(),
        output: Sort::graph([]),
        delta: parse_formula("(not (eq x1 (const a)))").unwrap(),
        phi: [(EDGE.to_string(), parse_formula("(rel edge x1 x2)").unwrap())]
            .into_iter()
            .collect(),
        kappa: Default::default(),
    };
    match validate_scheme(raw) {
        Err(ViolationReport::Condition { condition, witness, .. }) => {
            assert!(condition.contains("edge"), "{condition}");
            assert!(witness.size() <= 2, "small witness expected");
        }
        other => panic!("expected a guard violation, got {other:?}"),
    }
}

#[test]
fn apply_fus_creates_loop() {
    let sort = gs_ab();
    let s = Structure::graph_with_sources(2, &[(0, 1)], &[("a", 0), ("b", 1)]).unwrap();
    let f = apply_scheme(&fus(&sort, "a", "b").unwrap(), &s).unwrap();
    assert_eq!(f.size(), 1);
    let v = f.source("a").unwrap();
    assert_eq!(f.source("b").unwrap(), v);
    assert!(f.has_edge(v, v));
}

#[test]
fn apply_fus_exhaustive_against_direct_quotient() {
    // independent oracle: identify the two source elements directly
    fn quotient(s: &Structure) -> Structure {
        let xa = s.source("a").unwrap();
        let xb = s.source("b").unwrap();
        if xa == xb {
            return s.clone();
        }
        let redirect = |v| if v == xa { xb } else { v };
        let mut domain = s.domain().clone();
        domain.remove(&xa);
        let tuples = s
            .all_tuples()
            .iter()
            .map(|(r, ts)| {
                (
                    r.clone(),
                    ts.iter()
                        .map(|t| t.iter().map(|v| redirect(*v)).collect())
                        .collect(),
                )
            })
            .collect();
        let sources = s
            .sources()
            .iter()
            .map(|(c, v)| (c.clone(), redirect(*v)))
            .collect();
        Structure::new(s.sort().clone(), domain, tuples, sources).unwrap()
    }
    let sort = gs_ab();
    let scheme = fus(&sort, "a", "b").unwrap();
    for s in enumerate_structures(&sort, 3, true) {
        let via_scheme = apply_scheme(&scheme, &s).unwrap();
        assert!(
            isomorphic(&via_scheme, &quotient(&s)),
            "disagree on {s:?}: {via_scheme:?}"
        );
    }
}

#[test]
fn apply_inclusion_keeps_structure() {
    let sort = gs_ab();
    let bigger = Sort::new(
        [("edge".to_string(), 2), ("u".to_string(), 1)],
        ["a".to_string(), "b".to_string()],
    )
    .unwrap();
    let s = Structure::graph_with_sources(2, &[(0, 1)], &[("a", 0), ("b", 1)]).unwrap();
    let out = apply_scheme(&inclusion(&sort, &bigger).unwrap(), &s).unwrap();
    assert_eq!(out.domain(), s.domain());
    assert_eq!(out.tuples(EDGE), s.tuples(EDGE));
    assert!(out.tuples("u").is_empty());
}

#[test]
fn apply_srcfg_shrinks_sort() {
    let sort = gs_ab();
    let s = Structure::graph_with_sources(2, &[], &[("a", 0), ("b", 1)]).unwrap();
    let out = apply_scheme(&srcfg(&sort, "a").unwrap(), &s).unwrap();
    assert!(!out.sort().consts.contains("a"));
    assert_eq!(out.size(), 2);
}

#[test]
fn compose_identity_is_neutral() {
    let sort = gs_ab();
    let id = inclusion(&sort, &sort).unwrap();
    let g = fus(&sort, "a", "b").unwrap();
    let left = compose_schemes(&id, &g).unwrap();
    let right = compose_schemes(&g, &id).unwrap();
    for s in enumerate_structures(&sort, 3, true) {
        let expect = apply_scheme(&g, &s).unwrap();
        assert!(isomorphic(&apply_scheme(&left, &s).unwrap(), &expect));
        assert!(isomorphic(&apply_scheme(&right, &s).unwrap(), &expect));
    }
}

#[test]
fn compose_matches_sequential_application() {
    let sort = gs_ab();
    let pairs = [
        (fus(&sort, "a", "b").unwrap(), fus(&sort, "a", "b").unwrap()),
        (srcfg(&gs_ab(), "b").unwrap(), fus(&sort, "a", "b").unwrap()),
        (
            srcren(&Sort::graph(["b".to_string()]), "b", "c").unwrap(),
            srcfg(&sort, "a").unwrap(),
        ),
    ];
    for (second, first) in pairs {
        let composed = compose_schemes(&second, &first).unwrap();
        assert!(validate_scheme(composed.raw().clone()).is_ok());
        for s in enumerate_structures(&sort, 3, true) {
            let sequential = apply_scheme(&second, &apply_scheme(&first, &s).unwrap()).unwrap();
            let direct = apply_scheme(&composed, &s).unwrap();
            assert!(isomorphic(&sequential, &direct), "on {s:?}");
        }
    }
}

#[test]
fn compose_rename_then_forget() {
    // forgetting the renamed label equals renaming away and dropping
    let sort = Sort::graph(["a".to_string()]);
    let ren = srcren(&sort, "a", "b").unwrap();
    let fg = srcfg(&Sort::graph(["b".to_string()]), "b").unwrap();
    let composed = compose_schemes(&fg, &ren).unwrap();
    for s in enumerate_structures(&sort, 3, true) {
        let expect = apply_scheme(&srcfg(&sort, "a").unwrap(), &s).unwrap();
        let got = apply_scheme(&composed, &s).unwrap();
        assert!(isomorphic(&expect, &got));
    }
}

#[test]
fn add_and_mdf_builtins() {
    let pg = Sort::ports(["p".to_string(), "q".to_string()]);
    // one p-port and one q-port, no edges
    let s = Structure::new(
        pg.clone(),
        [0, 1].into_iter().collect(),
        [
            (EDGE.to_string(), alloc::collections::BTreeSet::new()),
            ("p".to_string(), [vec![0]].into_iter().collect()),
            ("q".to_string(), [vec![1]].into_iter().collect()),
        ]
        .into_iter()
        .collect(),
        alloc::collections::BTreeMap::new(),
    )
    .unwrap();
    let added = apply_scheme(&add_ports(&pg, "p", "q").unwrap(), &s).unwrap();
    assert_eq!(added.tuples(EDGE).len(), 1);
    assert!(added.has_edge(0, 1));
    // forgetting all ports leaves an edge-only graph
    let bare = apply_scheme(&mdf(&pg, &[]).unwrap(), &added).unwrap();
    assert!(bare.sort().is_graph());
    assert_eq!(bare.tuples(EDGE).len(), 1);
}

#[test]
fn ren_port_equals_mdf_instance() {
    let pg = Sort::ports(["p".to_string(), "q".to_string()]);
    let ren = ren_port(&pg, "p", "q").unwrap();
    let d = vec![
        ("p".to_string(), "q".to_string()),
        ("q".to_string(), "q".to_string()),
    ];
    let direct = mdf(&pg, &d).unwrap();
    for s in enumerate_structures(&pg, 2, true) {
        assert!(isomorphic(
            &apply_scheme(&ren, &s).unwrap(),
            &apply_scheme(&direct, &s).unwrap()
        ));
    }
}

#[test]
fn separation_analysis() {
    let sort = gs_ab();
    assert!(preserves_source_separation(&srcren(&sort, "a", "c").unwrap()).unwrap());
    assert!(preserves_source_separation(&srcfg(&sort, "a").unwrap()).unwrap());
    let fusion = fus(&sort, "a", "b").unwrap();
    assert!(!preserves_source_separation(&fusion).unwrap());
    // fusing and forgetting the dropped label preserves separation
    let fus_to = compose_schemes(&srcfg(&sort, "a").unwrap(), &fusion).unwrap();
    assert!(preserves_source_separation(&fus_to).unwrap());
    // the syntactic check is sufficient where it fires
    assert!(separation_syntactic_check(&srcren(&sort, "a", "c").unwrap()).unwrap());
    assert!(!separation_syntactic_check(&fusion).unwrap());
}

#[test]
fn separation_implies_separated_images() {
    let sort = gs_ab();
    let schemes = [
        srcren(&sort, "a", "c").unwrap(),
        compose_schemes(&srcfg(&sort, "a").unwrap(), &fus(&sort, "a", "b").unwrap()).unwrap(),
    ];
    for scheme in schemes {
        assert!(preserves_source_separation(&scheme).unwrap());
        for s in enumerate_structures(&sort, 3, true).filter(|s| s.is_source_separated()) {
            assert!(apply_scheme(&scheme, &s).unwrap().is_source_separated());
        }
    }
}

#[test]
fn type_commutes_with_application() {
    // the type of the image equals the type of the image of the type
    let sort = gs_ab();
    let schemes = [
        fus(&sort, "a", "b").unwrap(),
        srcfg(&sort, "a").unwrap(),
        srcren(&sort, "b", "c").unwrap(),
    ];
    for scheme in &schemes {
        for s in enumerate_structures(&sort, 3, true) {
            let lhs = compute_type(&apply_scheme(scheme, &s).unwrap());
            let type_realizer = compute_type(&s).into_structure();
            let rhs = compute_type(&apply_scheme(scheme, &type_realizer).unwrap());
            assert_eq!(lhs, rhs, "scheme on {s:?}");
        }
    }
}

fn port_structure(
    ports: &Sort,
    n: u32,
    edges: &[(u32, u32)],
    labels: &[(&str, u32)],
) -> Structure {
    let mut tuples: alloc::collections::BTreeMap<
        alloc::string::String,
        alloc::collections::BTreeSet<Vec<u32>>,
    > = alloc::collections::BTreeMap::new();
    tuples.insert(
        EDGE.to_string(),
        edges.iter().map(|(a, b)| vec![*a, *b]).collect(),
    );
    for (p, v) in labels {
        tuples
            .entry(p.to_string())
            .or_default()
            .insert(vec![*v]);
    }
    Structure::new(ports.clone(), (0..n).collect(), tuples, Default::default()).unwrap()
}

#[test]
fn split_union_on_inclusion() {
    // the identity-like inclusion splits into inclusions with a trivial
    // finishing sequence
    let sort1 = Sort::ports(["p".to_string()]);
    let sort2 = Sort::ports(["q".to_string()]);
    let whole = Sort::ports(["p".to_string(), "q".to_string()]);
    let h = inclusion(&whole, &whole).unwrap();
    let z1 = compute_type(&Structure::empty(sort1.clone()).unwrap());
    let z2 = compute_type(&Structure::empty(sort2.clone()).unwrap());
    let split = split_over_union(&h, &sort1, &sort2, &z1, &z2).unwrap();
    assert!(split.adds.is_empty());

    let x1 = port_structure(&sort1, 2, &[(0, 1)], &[("p", 0)]);
    let x2 = port_structure(&sort2, 1, &[], &[("q", 0)]);
    let direct = apply_scheme(&h, &crate::structures::oplus(&x1, &x2).unwrap()).unwrap();
    let via_split = split.apply(&x1, &x2).unwrap();
    assert!(isomorphic(&direct, &via_split));
}

#[test]
fn split_union_reconstructs_cross_edges() {
    // h adds every edge from a p-port to a q-port after the union
    let whole = Sort::ports(["p".to_string(), "q".to_string()]);
    let h = add_ports(&whole, "p", "q").unwrap();
    let sort1 = Sort::ports(["p".to_string()]);
    let sort2 = Sort::ports(["q".to_string()]);
    let z1 = compute_type(&Structure::empty(sort1.clone()).unwrap());
    let z2 = compute_type(&Structure::empty(sort2.clone()).unwrap());
    // the scheme expects the union sort, so widen it first
    let widened = compose_schemes(&h, &inclusion(&whole, &whole).unwrap()).unwrap();
    let split = split_over_union(&widened, &sort1, &sort2, &z1, &z2).unwrap();
    assert!(!split.adds.is_empty());

    let samples1 = [
        port_structure(&sort1, 2, &[(0, 1)], &[("p", 0)]),
        port_structure(&sort1, 3, &[(0, 1), (1, 2)], &[("p", 0), ("p", 2)]),
        port_structure(&sort1, 1, &[], &[]),
    ];
    let samples2 = [
        port_structure(&sort2, 2, &[(1, 0)], &[("q", 0), ("q", 1)]),
        port_structure(&sort2, 1, &[(0, 0)], &[("q", 0)]),
        port_structure(&sort2, 2, &[], &[]),
    ];
    for x1 in &samples1 {
        for x2 in &samples2 {
            let direct =
                apply_scheme(&widened, &crate::structures::oplus(x1, x2).unwrap()).unwrap();
            let via_split = split.apply(x1, x2).unwrap();
            assert!(isomorphic(&direct, &via_split), "{x1:?} + {x2:?}");
        }
    }
}

#[test]
fn split_union_uses_part_types() {
    // cross edges controlled by a loop at a source of the first part: the
    // split must consult the part type
    let s1 = Sort::graph(["a".to_string()]);
    let s2 = Sort::ports(["q".to_string()]);
    let whole = s1.union_disjoint_consts(&s2).unwrap();
    let out = Sort::ports(["q".to_string()]);
    let phi_edge = parse_formula(
        "(or (rel edge x1 x2) (and (rel edge (const a) (const a)) (rel q x2)))",
    )
    .unwrap();
    let h = validate_scheme(RawScheme {
        input: whole.clone(),
        output: out,
        delta: Formula::True,
        phi: [
            (EDGE.to_string(), phi_edge),
            ("q".to_string(), parse_formula("(rel q x1)").unwrap()),
        ]
        .into_iter()
        .collect(),
        kappa: Default::default(),
    })
    .unwrap();

    for loop_at_a in [false, true] {
        let x1 = if loop_at_a {
            Structure::graph_with_sources(2, &[(0, 0)], &[("a", 0)]).unwrap()
        } else {
            Structure::graph_with_sources(2, &[(0, 1)], &[("a", 0)]).unwrap()
        };
        let x2 = port_structure(&s2, 2, &[], &[("q", 0)]);
        let z1 = compute_type(&x1);
        let z2 = compute_type(&x2);
        let split = split_over_union(&h, &s1, &s2, &z1, &z2).unwrap();
        let direct = apply_scheme(&h, &crate::structures::oplus(&x1, &x2).unwrap()).unwrap();
        let via_split = split.apply(&x1, &x2).unwrap();
        assert!(isomorphic(&direct, &via_split), "loop_at_a={loop_at_a}");
    }
}
