use super::*;
use alloc::vec;

fn undirected(n: u32, pairs: &[(u32, u32)]) -> Structure {
    let mut edges = Vec::new();
    for (a, b) in pairs {
        edges.push((*a, *b));
        edges.push((*b, *a));
    }
    Structure::graph(n, &edges).unwrap()
}

fn p4() -> Structure {
    undirected(4, &[(0, 1), (1, 2), (2, 3)])
}

fn k3() -> Structure {
    undirected(3, &[(0, 1), (1, 2), (0, 2)])
}

#[test]
fn strong_modules_of_k2() {
    let k2 = undirected(2, &[(0, 1)]);
    let blocks = find_strong_modules(&k2).unwrap();
    assert_eq!(blocks.len(), 2);
    assert!(blocks.iter().all(|b| b.len() == 1));
}

#[test]
fn strong_modules_of_p4_are_singletons() {
    let blocks = find_strong_modules(&p4()).unwrap();
    assert_eq!(blocks.len(), 4);
    assert!(blocks.iter().all(|b| b.len() == 1));
}

#[test]
fn strong_modules_of_two_triangles() {
    let mut edges = vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)];
    let more: Vec<(u32, u32)> = edges.iter().map(|(a, b)| (*b, *a)).collect();
    edges.extend(more);
    let g = Structure::graph(6, &edges).unwrap();
    let blocks = find_strong_modules(&g).unwrap();
    assert_eq!(blocks.len(), 2);
    assert!(blocks.iter().all(|b| b.len() == 3));
}

#[test]
fn laminar_blocks() {
    // blocks of the returned family are pairwise disjoint
    for g in [p4(), k3(), undirected(5, &[(0, 1), (1, 2), (3, 4)])] {
        let blocks = find_strong_modules(&g).unwrap();
        for (i, a) in blocks.iter().enumerate() {
            for b in blocks.iter().skip(i + 1) {
                assert!(a.is_disjoint(b));
            }
        }
    }
}

#[test]
fn primality_examples() {
    assert!(is_prime(&p4()).unwrap());
    assert!(!is_prime(&k3()).unwrap());
    // singleton is not prime by convention
    assert!(!is_prime(&Structure::graph(1, &[]).unwrap()).unwrap());
    // two-vertex graphs are prime
    assert!(is_prime(&undirected(2, &[(0, 1)])).unwrap());
    assert!(is_prime(&Structure::graph(2, &[]).unwrap()).unwrap());
    // the 2x2 grid is the four-cycle, whose opposite corners form a
    // module; from 3x3 on grids are prime
    let grid22 = undirected(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
    assert!(!is_prime(&grid22).unwrap());
    let grid33 = undirected(
        9,
        &[
            (0, 1),
            (1, 2),
            (3, 4),
            (4, 5),
            (6, 7),
            (7, 8),
            (0, 3),
            (3, 6),
            (1, 4),
            (4, 7),
            (2, 5),
            (5, 8),
        ],
    );
    assert!(is_prime(&grid33).unwrap());
}

#[test]
fn decomposition_shapes() {
    // single vertex: a leaf
    let t = modular_decomposition(&Structure::graph(1, &[(0, 0)]).unwrap()).unwrap();
    assert_eq!(t, ModularTree::Leaf { looped: true });
    // the path on four vertices: one prime node with four leaves
    let t = modular_decomposition(&p4()).unwrap();
    match &t {
        ModularTree::Inner { quotient, children } => {
            assert_eq!(children.len(), 4);
            assert!(is_prime(quotient).unwrap());
            assert!(children
                .iter()
                .all(|c| matches!(c, ModularTree::Leaf { .. })));
        }
        other => panic!("expected an inner node, got {other:?}"),
    }
    // the complete graph on four vertices: one flat complete node
    let k4 = undirected(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    let t = modular_decomposition(&k4).unwrap();
    match &t {
        ModularTree::Inner { quotient, children } => {
            assert_eq!(children.len(), 4);
            assert_eq!(quotient.tuples(EDGE).len(), 12);
        }
        other => panic!("expected an inner node, got {other:?}"),
    }
}

#[test]
fn directed_linear_orders_flatten() {
    // the transitive tournament decomposes into one flat linear node
    let t3 = Structure::graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    assert!(!is_prime(&t3).unwrap());
    let tree = modular_decomposition(&t3).unwrap();
    match &tree {
        ModularTree::Inner { quotient, children } => {
            assert_eq!(children.len(), 3);
            assert!(super::degenerate_binary(quotient).is_some());
        }
        other => panic!("expected an inner node, got {other:?}"),
    }
    assert!(decomposition_roundtrip(&t3).unwrap());
}

#[test]
fn roundtrip_on_random_graphs() {
    let mut state = 0xabcdef12u64;
    let mut rng = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 33) as u32
    };
    for _ in 0..60 {
        let n = 1 + rng() % 8;
        let mut edges = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y && rng() % 3 == 0 {
                    edges.push((x, y));
                }
            }
        }
        let g = Structure::graph(n, &edges).unwrap();
        assert!(decomposition_roundtrip(&g).unwrap(), "{g:?}");
    }
}

#[test]
fn inner_quotients_prime_or_degenerate() {
    let mut state = 0x5eed5eedu64;
    let mut rng = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 33) as u32
    };
    for _ in 0..40 {
        let n = 2 + rng() % 6;
        let mut edges = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y && rng() % 2 == 0 {
                    edges.push((x, y));
                }
            }
        }
        let g = Structure::graph(n, &edges).unwrap();
        let tree = modular_decomposition(&g).unwrap();
        for q in tree.quotients() {
            let ok = is_prime(q).unwrap()
                || (q.domain().len() > 2 && super::degenerate_binary(q).is_some());
            assert!(ok, "quotient neither prime nor flat degenerate: {q:?}");
        }
    }
}

#[test]
fn cograph_membership() {
    let shapes = [
        undirected(2, &[(0, 1)]),
        Structure::graph(2, &[]).unwrap(),
    ];
    let k4 = undirected(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    assert!(is_f_graph(&k4, &shapes).unwrap());
    assert!(!is_f_graph(&p4(), &shapes).unwrap());
    // singletons belong to every closure
    assert!(is_f_graph(&Structure::graph(1, &[]).unwrap(), &shapes).unwrap());
    // shape sets must be prime
    assert!(is_f_graph(&k4, &[k3()]).is_err());
}
