use super::*;
use alloc::vec;

fn edge_ab() -> Structure {
    Structure::graph_with_sources(2, &[(0, 1)], &[("a", 0), ("b", 1)]).unwrap()
}

#[test]
fn oplus_two_singletons() {
    let a = Structure::single_source(["a".to_string()]);
    let b = Structure::single_source(["b".to_string()]);
    let u = oplus(&a, &b).unwrap();
    assert_eq!(u.size(), 2);
    assert_eq!(u.sources().len(), 2);
    assert!(u.all_tuples().values().all(|t| t.is_empty()));
}

#[test]
fn oplus_with_empty_is_identity() {
    let s = edge_ab();
    let e = Structure::empty(Sort::graph([])).unwrap();
    let u = oplus(&s, &e).unwrap();
    assert!(isomorphic(&u, &s));
    let u2 = oplus(&e, &s).unwrap();
    assert!(isomorphic(&u2, &s));
}

#[test]
fn oplus_two_edges() {
    let s = edge_ab();
    let t = Structure::graph_with_sources(2, &[(0, 1)], &[("c", 0), ("d", 1)]).unwrap();
    let u = oplus(&s, &t).unwrap();
    assert_eq!(u.size(), 4);
    assert_eq!(u.tuples(EDGE).len(), 2);
    assert_eq!(u.sources().len(), 4);
}

#[test]
fn oplus_rejects_shared_constants() {
    let s = edge_ab();
    assert!(matches!(oplus(&s, &s), Err(Error::Sort(_))));
}

#[test]
fn empty_domain_needs_empty_consts() {
    let err = Structure::new(
        Sort::graph(["a".to_string()]),
        BTreeSet::new(),
        BTreeMap::new(),
        BTreeMap::new(),
    );
    assert!(err.is_err());
}

#[test]
fn type_of_internal_path() {
    // a -> x -> b with x internal: the type is two sources, no edge
    let s = Structure::graph_with_sources(3, &[(0, 1), (1, 2)], &[("a", 0), ("b", 2)]).unwrap();
    let t = compute_type(&s);
    assert_eq!(t.as_structure().size(), 2);
    assert!(t.as_structure().tuples(EDGE).is_empty());
}

#[test]
fn type_identifies_shared_sources() {
    let s = Structure::graph_with_sources(2, &[], &[("a", 0), ("b", 0)]).unwrap();
    let t = compute_type(&s);
    assert_eq!(t.as_structure().size(), 1);
    assert_eq!(t.as_structure().sources().len(), 2);
}

#[test]
fn source_separation() {
    let both = Structure::graph_with_sources(1, &[], &[("a", 0), ("b", 0)]).unwrap();
    assert!(!both.is_source_separated());
    assert!(edge_ab().is_source_separated());
}

#[test]
fn isomorphic_relabeled() {
    let s = Structure::graph_with_sources(3, &[(0, 1), (1, 2)], &[("a", 0)]).unwrap();
    let map: BTreeMap<ElemId, ElemId> = [(0, 7), (1, 3), (2, 5)].into_iter().collect();
    let t = s.relabel(&map);
    assert!(isomorphic(&s, &t));
    let no_edge = Structure::graph_with_sources(2, &[], &[("a", 0), ("b", 1)]).unwrap();
    assert!(!isomorphic(&edge_ab(), &no_edge));
}

// brute-force isomorphism oracle: try all permutations
fn iso_oracle(s: &Structure, t: &Structure) -> bool {
    if s.sort() != t.sort() || s.size() != t.size() {
        return false;
    }
    let sv: alloc::vec::Vec<ElemId> = s.domain().iter().copied().collect();
    let tv: alloc::vec::Vec<ElemId> = t.domain().iter().copied().collect();
    fn perms(v: &[ElemId]) -> alloc::vec::Vec<alloc::vec::Vec<ElemId>> {
        if v.is_empty() {
            return vec![vec![]];
        }
        let mut out = vec![];
        for i in 0..v.len() {
            let mut rest = v.to_vec();
            let x = rest.remove(i);
            for mut p in perms(&rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }
    for p in perms(&tv) {
        let map: BTreeMap<ElemId, ElemId> = sv.iter().copied().zip(p.iter().copied()).collect();
        let ok = s.sources().iter().all(|(c, x)| t.sources()[c] == map[x])
            && s.all_tuples().iter().all(|(r, tups)| {
                let mapped: BTreeSet<alloc::vec::Vec<ElemId>> = tups
                    .iter()
                    .map(|tu| tu.iter().map(|x| map[x]).collect())
                    .collect();
                mapped == *t.tuples(r)
            });
        if ok {
            return true;
        }
    }
    false
}

#[test]
fn isomorphism_matches_permutation_oracle() {
    // all graphs on <= 3 vertices with one source label, pairwise
    let sort = Sort::graph(["a".to_string()]);
    let all: alloc::vec::Vec<Structure> = enumerate_structures(&sort, 3, false)
        .filter(|s| s.size() <= 2)
        .collect();
    for s in &all {
        for t in &all {
            assert_eq!(isomorphic(s, t), iso_oracle(s, t), "{s:?} vs {t:?}");
        }
    }
}

#[test]
fn enumerate_counts() {
    // sort (∅,∅), max 1: empty structure and the singleton
    let sort = Sort::new([], []).unwrap();
    assert_eq!(enumerate_structures(&sort, 1, false).count(), 2);
    // sort ({edge},∅), max 1, up to iso: empty, vertex, loop
    let sort = Sort::graph([]);
    assert_eq!(enumerate_structures(&sort, 1, true).count(), 3);
    // counts monotone in max_size
    let c2 = enumerate_structures(&sort, 2, true).count();
    assert!(c2 > 3);
}

#[test]
fn split_sources_on_doubly_labelled_vertex() {
    let s = Structure::graph_with_sources(1, &[], &[("a", 0), ("b", 0)]).unwrap();
    let sp = split_sources(&s);
    assert_eq!(sp.result.size(), 2);
    assert_eq!(sp.c0, ["a".to_string()].into_iter().collect());
    assert_eq!(sp.c1, ["b".to_string()].into_iter().collect());
    // a stays on the old vertex, b moves to a fresh isolated one
    assert_eq!(sp.result.source("a").unwrap(), 0);
    assert_ne!(sp.result.source("b").unwrap(), 0);
    assert!(sp.result.is_source_separated());
}

#[test]
fn split_sources_separated_is_identity() {
    let s = edge_ab();
    let sp = split_sources(&s);
    assert!(sp.c1.is_empty());
    assert!(isomorphic(&sp.result, &s));
}

#[test]
fn split_commutes_with_oplus() {
    let s = Structure::graph_with_sources(2, &[(0, 1)], &[("a", 0), ("b", 0)]).unwrap();
    let t = Structure::graph_with_sources(1, &[], &[("c", 0), ("d", 0)]).unwrap();
    let lhs = split_sources(&oplus(&s, &t).unwrap()).result;
    let rhs = oplus(&split_sources(&s).result, &split_sources(&t).result).unwrap();
    assert!(isomorphic(&lhs, &rhs));
}

#[test]
fn bicomplete_on_k22() {
    // directed complete bipartite on 2+2
    let g = Structure::graph(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
    assert!(has_bicomplete(&g, 2, true).unwrap());
    let small = Structure::graph(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
    assert!(!has_bicomplete(&small, 2, true).unwrap());
}

// subset-enumeration oracle for the bicomplete test
fn bicomplete_oracle(g: &Structure, n: usize, directed: bool) -> bool {
    let verts: alloc::vec::Vec<ElemId> = g.domain().iter().copied().collect();
    let vn = verts.len();
    for umask in 0u32..(1 << vn) {
        if umask.count_ones() as usize != n {
            continue;
        }
        for wmask in 0u32..(1 << vn) {
            if wmask.count_ones() as usize != n || umask & wmask != 0 {
                continue;
            }
            let us: alloc::vec::Vec<ElemId> = verts
                .iter()
                .enumerate()
                .filter(|(i, _)| umask & (1 << i) != 0)
                .map(|(_, v)| *v)
                .collect();
            let ws: alloc::vec::Vec<ElemId> = verts
                .iter()
                .enumerate()
                .filter(|(i, _)| wmask & (1 << i) != 0)
                .map(|(_, v)| *v)
                .collect();
            let all = us.iter().all(|u| {
                ws.iter().all(|w| {
                    if directed {
                        g.has_edge(*u, *w)
                    } else {
                        g.has_edge(*u, *w) || g.has_edge(*w, *u)
                    }
                })
            });
            if all {
                return true;
            }
        }
    }
    false
}

#[test]
fn bicomplete_matches_oracle_on_random_graphs() {
    let mut state = 0x12345678u64;
    let mut rng = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as u32
    };
    for _ in 0..40 {
        let n = 4 + (rng() % 5) as u32; // 4..8
        let mut edges = alloc::vec::Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y && rng() % 3 == 0 {
                    edges.push((x, y));
                }
            }
        }
        let g = Structure::graph(n, &edges).unwrap();
        for m in 1..=2 {
            for dir in [true, false] {
                assert_eq!(
                    has_bicomplete(&g, m, dir).unwrap(),
                    bicomplete_oracle(&g, m, dir),
                );
            }
        }
    }
}

#[test]
fn sparsity_examples() {
    // directed K33 is not 1-sparse: 9 edges on 6 vertices
    let mut edges = alloc::vec::Vec::new();
    for u in 0..3 {
        for w in 3..6 {
            edges.push((u, w));
        }
    }
    let k33 = Structure::graph(6, &edges).unwrap();
    assert!(!is_uniformly_k_sparse(&k33, 1, 20).unwrap());
    let edgeless = Structure::graph(4, &[]).unwrap();
    assert!(is_uniformly_k_sparse(&edgeless, 0, 20).unwrap());
    let big = Structure::graph(25, &[]).unwrap();
    assert!(matches!(
        is_uniformly_k_sparse(&big, 1, 20),
        Err(Error::Capacity(_))
    ));
}

fn mg(vertices: u32, edges: &[(ElemId, ElemId)], sources: &[(&str, ElemId)]) -> MultiGraph {
    MultiGraph::new(
        (0..vertices).collect(),
        edges
            .iter()
            .enumerate()
            .map(|(i, p)| (i as ElemId, *p))
            .collect(),
        sources
            .iter()
            .map(|(c, x)| (c.to_string(), *x))
            .collect(),
    )
    .unwrap()
}

#[test]
fn mfus_creates_parallel_loops() {
    // edges a->b and b->a; fusing a,b gives one vertex with two loops
    let g = mg(2, &[(0, 1), (1, 0)], &[("a", 0), ("b", 1)]);
    let f = g.mfus("a", "b").unwrap();
    assert_eq!(f.vertices().len(), 1);
    assert_eq!(f.inc().len(), 2);
    assert!(has_multiedges(&f));
}

#[test]
fn mfus_identity_when_sources_equal() {
    let g = mg(1, &[], &[("a", 0), ("b", 0)]);
    assert_eq!(g.mfus("a", "b").unwrap(), g);
}

#[test]
fn srcren_roundtrip() {
    let g = mg(2, &[(0, 1)], &[("a", 0)]);
    let back = g.m_srcren("a", "c").unwrap().m_srcren("c", "a").unwrap();
    assert_eq!(back, g);
}

#[test]
fn simplify_merges_parallel_edges() {
    let g = mg(2, &[(0, 1), (0, 1)], &[("a", 0), ("b", 1)]);
    let s = simplify_u(&g);
    assert_eq!(s.tuples(EDGE).len(), 1);
    let simple = mg(2, &[(0, 1)], &[("a", 0), ("b", 1)]);
    assert_eq!(simplify_u(&simple).tuples(EDGE).len(), 1);
}

#[test]
fn iota_section_of_u() {
    let s = edge_ab();
    assert_eq!(simplify_u(&inject_iota(&s).unwrap()), s);
    let edgeless = Structure::graph(2, &[]).unwrap();
    assert_eq!(inject_iota(&edgeless).unwrap().inc().len(), 0);
}

#[test]
fn eta_shared_out_neighbor() {
    // x -> a and x -> b: wait, eta wants edges from x to the sources
    let g =
        Structure::graph_with_sources(3, &[(2, 0), (2, 1)], &[("a", 0), ("b", 1)]).unwrap();
    let e = eta(&g).unwrap();
    assert_eq!(e.len(), 1);
    assert!(e.contains(&("a".to_string(), "b".to_string())));
    let lonely = Structure::graph_with_sources(2, &[], &[("a", 0), ("b", 1)]).unwrap();
    assert!(eta(&lonely).unwrap().is_empty());
}

#[test]
fn eta_additive_over_oplus() {
    let g =
        Structure::graph_with_sources(3, &[(2, 0), (2, 1)], &[("a", 0), ("b", 1)]).unwrap();
    let h =
        Structure::graph_with_sources(3, &[(0, 2), (1, 2)], &[("c", 0), ("d", 1)]).unwrap();
    let u = oplus(&g, &h).unwrap();
    let mut expect = eta(&g).unwrap();
    expect.extend(eta(&h).unwrap());
    assert_eq!(eta(&u).unwrap(), expect);
}

#[test]
fn predict_mfus_cases() {
    // eta containing {a,b} predicts multiedges regardless of the type
    let g =
        Structure::graph_with_sources(3, &[(2, 0), (2, 1)], &[("a", 0), ("b", 1)]).unwrap();
    let t = compute_type(&g);
    let e = eta(&g).unwrap();
    assert!(predict_mfus_multiedge(&t, &e, "a", "b").unwrap());

    // type with edges a->b and b->a, empty eta: fusing inside the type
    let g2 = edge_ab();
    let g2 = {
        let mut tuples = g2.all_tuples().clone();
        tuples.get_mut(EDGE).unwrap().insert(vec![1, 0]);
        Structure::new(
            g2.sort().clone(),
            g2.domain().clone(),
            tuples,
            g2.sources().clone(),
        )
        .unwrap()
    };
    assert!(predict_mfus_multiedge(&compute_type(&g2), &eta(&g2).unwrap(), "a", "b").unwrap());

    // edgeless type, empty eta: no multiedges
    let g3 = Structure::graph_with_sources(2, &[], &[("a", 0), ("b", 1)]).unwrap();
    assert!(!predict_mfus_multiedge(&compute_type(&g3), &eta(&g3).unwrap(), "a", "b").unwrap());
}

#[test]
fn predict_matches_direct_mfus_exhaustively() {
    // all graphs on <= 3 vertices with sources a,b (the 4-vertex case runs
    // in the acceptance suite)
    let sort = Sort::graph(["a".to_string(), "b".to_string()]);
    for s in enumerate_structures(&sort, 3, true) {
        let t = compute_type(&s);
        let e = eta(&s).unwrap();
        let direct = has_multiedges(&inject_iota(&s).unwrap().mfus("a", "b").unwrap());
        assert_eq!(
            predict_mfus_multiedge(&t, &e, "a", "b").unwrap(),
            direct,
            "graph {s:?}"
        );
    }
}

#[test]
fn u_is_homomorphism_spotcheck() {
    let g = mg(2, &[(0, 1), (0, 1)], &[("a", 0)]);
    let h = mg(1, &[(0, 0)], &[("b", 0)]);
    let lhs = simplify_u(&g.m_oplus(&h).unwrap());
    let rhs = oplus(&simplify_u(&g), &simplify_u(&h)).unwrap();
    assert!(isomorphic(&lhs, &rhs));
}

#[test]
fn del_edges_behaviour() {
    let g = Structure::graph_with_sources(
        3,
        &[(0, 1), (1, 0), (1, 2)],
        &[("a", 0), ("b", 1)],
    )
    .unwrap();
    let a = del_edges(&g, &BTreeSet::new()).unwrap();
    assert_eq!(a, g);
    let pairs: BTreeSet<(Label, Label)> =
        [("a".to_string(), "b".to_string())].into_iter().collect();
    let d = del_edges(&g, &pairs).unwrap();
    assert_eq!(d.tuples(EDGE).len(), 1);
    assert!(d.has_edge(1, 2));
}

#[test]
fn canonical_form_is_stable() {
    let s = Structure::graph_with_sources(3, &[(0, 1), (1, 2)], &[("a", 1)]).unwrap();
    let c1 = canonical_form(&s);
    let map: BTreeMap<ElemId, ElemId> = [(0, 9), (1, 4), (2, 6)].into_iter().collect();
    let c2 = canonical_form(&s.relabel(&map));
    assert_eq!(c1, c2);
}
