//! Unlabelled graphs on few vertices.
//!
//! Every graph on `n + 1` vertices arises from one on `n` vertices by adding
//! a vertex of minimum degree, so candidates are generated that way and then
//! deduplicated with the isomorphism oracle inside buckets of a cheap
//! invariant.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::graph::Graph;
use crate::group::is_isomorphic;
use crate::io::to_graph6;
use crate::par::Exec;

/// Largest order for which enumeration is offered (12346 graphs).
pub const MAX_ENUMERATION_ORDER: usize = 8;

/// Number of unlabelled graphs on `n` vertices for `n = 0..=8`.
pub const KNOWN_COUNTS: [usize; 9] = [1, 1, 2, 4, 11, 34, 156, 1044, 12346];

static CACHE: OnceLock<Mutex<Vec<Vec<Graph>>>> = OnceLock::new();

fn invariant(g: &Graph) -> Vec<u64> {
    let n = g.n();
    let mut per_vertex: Vec<Vec<u64>> = (0..n)
        .map(|v| {
            let mut nd: Vec<u64> = g.neighbours(v).map(|u| g.degree(u) as u64).collect();
            nd.sort_unstable();
            let tri: usize = g.neighbours(v).map(|u| g.common_neighbours(u, v)).sum();
            let mut key = vec![g.degree(v) as u64, tri as u64];
            key.extend(nd);
            key
        })
        .collect();
    per_vertex.sort();
    let mut key = vec![g.edge_count() as u64];
    for k in per_vertex {
        key.push(u64::MAX);
        key.extend(k);
    }
    key
}

fn extend(parent: &Graph) -> Vec<Graph> {
    let n = parent.n();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let d = mask.count_ones() as usize;
        // The new vertex must have minimum degree in the child.
        let ok = (0..n).all(|u| parent.degree(u) + ((mask >> u) & 1) as usize >= d);
        if !ok {
            continue;
        }
        let mut child = Graph::empty(n + 1);
        for (u, v) in parent.edges() {
            child.set_edge(u, v);
        }
        for u in 0..n {
            if (mask >> u) & 1 == 1 {
                child.set_edge(u, n);
            }
        }
        out.push(child);
    }
    out
}

fn next_order(parents: &[Graph], exec: Exec) -> Vec<Graph> {
    let candidates: Vec<(Vec<u64>, Graph)> = exec
        .map_slice(parents, extend)
        .into_iter()
        .flatten()
        .map(|g| (invariant(&g), g))
        .collect();
    let mut buckets: HashMap<Vec<u64>, Vec<Graph>> = HashMap::new();
    let mut order: Vec<Vec<u64>> = Vec::new();
    for (key, g) in candidates {
        buckets
            .entry(key.clone())
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(g);
    }
    let buckets: Vec<Vec<Graph>> = order
        .iter()
        .map(|k| buckets.remove(k).unwrap_or_default())
        .collect();
    let mut out: Vec<Graph> = exec
        .map_slice(&buckets, |bucket| {
            let mut kept: Vec<Graph> = Vec::new();
            for g in bucket {
                if !kept
                    .iter()
                    .any(|h| is_isomorphic(h, g, usize::MAX).expect("no bound"))
                {
                    kept.push(g.clone());
                }
            }
            kept
        })
        .into_iter()
        .flatten()
        .collect();
    out.sort_by_cached_key(|g| (g.edge_count(), to_graph6(g)));
    out
}

/// All graphs on `n` vertices up to isomorphism, ordered by edge count and
/// then graph6 string. `None` above [`MAX_ENUMERATION_ORDER`] or for `n = 0`.
pub fn unlabelled_graphs(n: usize) -> Option<Vec<Graph>> {
    if n == 0 || n > MAX_ENUMERATION_ORDER {
        return None;
    }
    let cache = CACHE.get_or_init(|| Mutex::new(vec![vec![Graph::empty(1)]]));
    let mut levels = cache.lock().expect("enumeration cache poisoned");
    while levels.len() < n {
        let next = next_order(levels.last().expect("seeded"), Exec::default());
        levels.push(next);
    }
    Some(levels[n - 1].clone())
}

/// All graphs with between `1` and `max_n` vertices, smallest first.
pub fn unlabelled_graphs_up_to(max_n: usize) -> Option<Vec<Graph>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.extend(unlabelled_graphs(n)?);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_known_sequence() {
        for (n, &count) in KNOWN_COUNTS.iter().enumerate().take(7).skip(1) {
            assert_eq!(unlabelled_graphs(n).unwrap().len(), count, "n = {n}");
        }
        assert!(unlabelled_graphs(0).is_none());
        assert!(unlabelled_graphs(9).is_none());
    }

    #[test]
    fn small_orders_listed_in_order() {
        let g3 = unlabelled_graphs(3).unwrap();
        let edges: Vec<usize> = g3.iter().map(Graph::edge_count).collect();
        assert_eq!(edges, vec![0, 1, 2, 3]);
    }
}
