#![allow(dead_code)]

use std::collections::BTreeMap;

use lexsym_core::Graph;
use proptest::prelude::*;

pub fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits[k] {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)
            .prop_map(move |bits| graph_from_bits(n, &bits))
    })
}

pub fn arb_perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// Visit every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

pub fn brute_force_automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut out = Vec::new();
    for_each_permutation(n, |p| {
        let ok = (0..n).all(|u| (u + 1..n).all(|v| g.has_edge(u, v) == g.has_edge(p[u], p[v])));
        if ok {
            out.push(p.to_vec());
        }
    });
    out
}

/// Naive 2-WL: colours are nested signature values interned in a map, with
/// no attempt at canonical numbering. Returns a pair-indexed class id vector.
pub fn naive_wl(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut colour: Vec<usize> = (0..n * n)
        .map(|i| {
            let (u, v) = (i / n, i % n);
            if u == v {
                0
            } else if g.has_edge(u, v) {
                1
            } else {
                2
            }
        })
        .collect();
    loop {
        let mut ids: BTreeMap<(usize, Vec<(usize, usize)>), usize> = BTreeMap::new();
        let sigs: Vec<(usize, Vec<(usize, usize)>)> = (0..n * n)
            .map(|i| {
                let (u, v) = (i / n, i % n);
                let mut m: Vec<(usize, usize)> =
                    (0..n).map(|w| (colour[u * n + w], colour[w * n + v])).collect();
                m.sort_unstable();
                (colour[i], m)
            })
            .collect();
        for s in &sigs {
            let next = ids.len();
            ids.entry(s.clone()).or_insert(next);
        }
        let next: Vec<usize> = sigs.iter().map(|s| ids[s]).collect();
        if classes(&next) == classes(&colour) {
            return next;
        }
        colour = next;
    }
}

/// Number of classes of a colouring.
pub fn classes(c: &[usize]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Whether two colourings induce the same partition.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    let mut fwd = BTreeMap::new();
    let mut back = BTreeMap::new();
    a.iter()
        .zip(b)
        .all(|(x, y)| *fwd.entry(x).or_insert(y) == y && *back.entry(y).or_insert(x) == x)
}
