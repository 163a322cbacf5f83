//! Cross-checks against brute-force implementations that share no code with
//! the library beyond the graph type.

mod common;

use common::*;
use lexsym_core::enumerate::unlabelled_graphs_up_to;
use lexsym_core::graph::{lex_product, Graph, ProductVertex};
use lexsym_core::group::{automorphisms, find_isomorphism, orbitals, DEFAULT_BOUND};
use lexsym_core::wl::{
    edge_triangle_closed_form, edge_triangle_direct, stable_partition, EdgeTriangleCounts,
};

fn adjacency_counts(z: &Graph, p: usize, q: usize) -> EdgeTriangleCounts {
    let mut d = EdgeTriangleCounts::default();
    for r in (0..z.n()).filter(|&r| r != p && r != q) {
        match (z.has_edge(p, r), z.has_edge(r, q)) {
            (true, true) => d.d11 += 1,
            (true, false) => d.d12 += 1,
            (false, true) => d.d21 += 1,
            (false, false) => d.d22 += 1,
        }
    }
    d
}

#[test]
fn automorphism_orders_match_permutation_search() {
    for g in unlabelled_graphs_up_to(6).unwrap() {
        let brute = brute_force_automorphisms(&g);
        let group = automorphisms(&g, DEFAULT_BOUND).unwrap();
        assert_eq!(group.order(), brute.len() as u128, "{g:?}");
        if brute.len() <= 1000 {
            let mut listed: Vec<Vec<usize>> = group
                .elements()
                .unwrap()
                .iter()
                .map(|p| p.images().to_vec())
                .collect();
            listed.sort();
            let mut brute = brute;
            brute.sort();
            assert_eq!(listed, brute);
        }
    }
}

#[test]
fn product_automorphisms_match_permutation_search() {
    let small = unlabelled_graphs_up_to(3).unwrap();
    for x in &small {
        for y in &small {
            if x.n() * y.n() > 8 {
                continue;
            }
            let z = lex_product(x, y).unwrap();
            let brute = brute_force_automorphisms(&z).len() as u128;
            assert_eq!(automorphisms(&z, DEFAULT_BOUND).unwrap().order(), brute);
        }
    }
}

#[test]
fn stable_partition_matches_naive_refinement() {
    let mut graphs = unlabelled_graphs_up_to(6).unwrap();
    graphs.push(lex_product(&Graph::cycle(4), &Graph::complete(2)).unwrap());
    graphs.push(lex_product(&Graph::path(3), &Graph::cycle(3).complement()).unwrap());
    for g in graphs {
        let ours: Vec<usize> = {
            let c = stable_partition(&g);
            (0..g.n() * g.n())
                .map(|i| c.get(i / g.n(), i % g.n()) as usize)
                .collect()
        };
        assert!(same_partition(&ours, &naive_wl(&g)), "{g:?}");
    }
}

#[test]
fn edge_triangle_counts_match_adjacency_count() {
    let small = unlabelled_graphs_up_to(3).unwrap();
    let mut pairs: Vec<(Graph, Graph)> = Vec::new();
    for x in &small {
        for y in &small {
            pairs.push((x.clone(), y.clone()));
        }
    }
    pairs.push((Graph::cycle(4), Graph::complete(2)));
    for (x, y) in pairs {
        let z = lex_product(&x, &y).unwrap();
        let ny = y.n();
        for p in 0..z.n() {
            for q in z.neighbours(p) {
                let (a, b) = (ProductVertex::from_flat(p, ny), ProductVertex::from_flat(q, ny));
                let expected = adjacency_counts(&z, p, q);
                assert_eq!(edge_triangle_closed_form(&x, &y, a, b).unwrap(), expected);
                assert_eq!(edge_triangle_direct(&x, &y, a, b).unwrap(), expected);
            }
        }
    }
}

#[test]
fn closed_form_spot_values() {
    let (x, y) = (Graph::cycle(4), Graph::complete(2));
    let inner =
        edge_triangle_closed_form(&x, &y, ProductVertex::new(0, 0), ProductVertex::new(0, 1)).unwrap();
    assert_eq!((inner.d11, inner.d12, inner.d21, inner.d22), (4, 0, 0, 2));
    let outer =
        edge_triangle_closed_form(&x, &y, ProductVertex::new(0, 0), ProductVertex::new(1, 0)).unwrap();
    assert_eq!((outer.d11, outer.d12, outer.d21, outer.d22), (2, 2, 2, 0));
}

#[test]
fn orbitals_match_brute_force_orbits_on_pairs() {
    for g in unlabelled_graphs_up_to(5).unwrap() {
        let n = g.n();
        let auts = brute_force_automorphisms(&g);
        let group = automorphisms(&g, DEFAULT_BOUND).unwrap();
        let mut ours: Vec<Vec<(usize, usize)>> = orbitals(&group);
        ours.iter_mut().for_each(|o| o.sort());
        ours.sort();
        let mut brute: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut seen = vec![false; n * n];
        for u in 0..n {
            for v in 0..n {
                if seen[u * n + v] {
                    continue;
                }
                let mut orbit: Vec<(usize, usize)> = auts.iter().map(|p| (p[u], p[v])).collect();
                orbit.sort();
                orbit.dedup();
                orbit.iter().for_each(|&(a, b)| seen[a * n + b] = true);
                brute.push(orbit);
            }
        }
        brute.sort();
        assert_eq!(ours, brute);
    }
}

#[test]
fn isomorphism_search_agrees_with_relabelling() {
    let graphs = unlabelled_graphs_up_to(5).unwrap();
    for (i, a) in graphs.iter().enumerate() {
        for (j, b) in graphs.iter().enumerate() {
            let found = find_isomorphism(a, b, DEFAULT_BOUND).unwrap();
            assert_eq!(found.is_some(), i == j);
            if let Some(map) = found {
                assert_eq!(a.relabel(&map), *b);
            }
        }
    }
}

#[test]
fn enumeration_counts_up_to_eight() {
    use lexsym_core::enumerate::{unlabelled_graphs, KNOWN_COUNTS};
    for (n, &count) in KNOWN_COUNTS.iter().enumerate().skip(1) {
        assert_eq!(unlabelled_graphs(n).unwrap().len(), count, "n = {n}");
    }
}
