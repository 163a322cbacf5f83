//! Ground-truth permutation groups for small graphs.
//!
//! Automorphism groups are found by backtracking over partial vertex maps.
//! Candidate images are restricted to vertices with the same stable
//! Weisfeiler–Leman diagonal colour, and every extension must preserve the
//! stable colours of all pairs already mapped. The group is stored as the
//! generators discovered while walking a pointwise-stabiliser chain along the
//! base `0, 1, …, n-1`; the order is the product of the basic orbit lengths.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::OracleError;
use crate::graph::{disjoint_union, Graph};
use crate::wl::{stable_partition, PairColouring};

/// Default vertex bound for the oracle.
pub const DEFAULT_BOUND: usize = 14;

/// Largest group the oracle will list element by element.
pub const ELEMENT_LIMIT: u128 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, OracleError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(OracleError::InvalidPermutation(format!("{images:?}")));
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_automorphism(&self, g: &Graph) -> bool {
        self.degree() == g.n()
            && g.edges()
                .into_iter()
                .all(|(u, v)| g.has_edge(self.apply(u), self.apply(v)))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PermGroup {
    n: usize,
    generators: Vec<Permutation>,
    order: u128,
}

impl PermGroup {
    pub fn trivial(n: usize) -> Self {
        PermGroup {
            n,
            generators: Vec::new(),
            order: 1,
        }
    }

    /// Group generated by `generators`, order found by closure.
    pub fn from_generators(n: usize, generators: Vec<Permutation>) -> Result<Self, OracleError> {
        if let Some(bad) = generators.iter().find(|g| g.degree() != n) {
            return Err(OracleError::InvalidPermutation(format!("{:?}", bad.images())));
        }
        let mut group = PermGroup {
            n,
            generators,
            order: 0,
        };
        group.order = group.closure(ELEMENT_LIMIT)?.len() as u128;
        Ok(group)
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u128 {
        self.order
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Every element, sorted lexicographically by image list.
    pub fn elements(&self) -> Result<Vec<Permutation>, OracleError> {
        if self.order > ELEMENT_LIMIT {
            return Err(OracleError::TooManyElements {
                order: self.order,
                limit: ELEMENT_LIMIT,
            });
        }
        let mut all: Vec<Permutation> = self.closure(ELEMENT_LIMIT)?.into_iter().collect();
        all.sort();
        Ok(all)
    }

    fn closure(&self, limit: u128) -> Result<HashSet<Permutation>, OracleError> {
        let id = Permutation::identity(self.n);
        let mut seen = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in &self.generators {
                let q = p.then(g);
                if seen.insert(q.clone()) {
                    if seen.len() as u128 > limit {
                        return Err(OracleError::TooManyElements {
                            order: seen.len() as u128,
                            limit,
                        });
                    }
                    queue.push_back(q);
                }
            }
        }
        Ok(seen)
    }

    /// Orbits on points, each sorted, ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.n);
        for g in &self.generators {
            for i in 0..self.n {
                uf.union(i, g.apply(i));
            }
        }
        uf.classes()
    }

    /// Orbits on ordered pairs under `g·(x, y) = (gx, gy)`, each sorted,
    /// ordered by smallest member.
    pub fn orbitals(&self) -> Vec<Vec<(usize, usize)>> {
        let n = self.n;
        let mut uf = UnionFind::new(n * n);
        for g in &self.generators {
            for x in 0..n {
                for y in 0..n {
                    uf.union(x * n + y, g.apply(x) * n + g.apply(y));
                }
            }
        }
        uf.classes()
            .into_iter()
            .map(|c| c.into_iter().map(|i| (i / n, i % n)).collect())
            .collect()
    }

    /// Orbital id of every ordered pair, row-major.
    pub fn orbital_index(&self) -> Vec<usize> {
        let n = self.n;
        let mut idx = vec![0; n * n];
        for (k, class) in self.orbitals().iter().enumerate() {
            for &(x, y) in class {
                idx[x * n + y] = k;
            }
        }
        idx
    }
}

pub fn orbits(group: &PermGroup) -> Vec<Vec<usize>> {
    group.orbits()
}

pub fn orbitals(group: &PermGroup) -> Vec<Vec<(usize, usize)>> {
    group.orbitals()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }

    fn classes(&mut self) -> Vec<Vec<usize>> {
        let mut by_root: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in 0..self.parent.len() {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        let mut out: Vec<Vec<usize>> = by_root.into_values().collect();
        out.sort_by_key(|c| c[0]);
        out
    }
}

/// Backtracking search for colour-preserving maps from a source vertex set
/// onto a target vertex set of one coloured pair space.
struct Matcher<'a> {
    colour: &'a PairColouring,
    n: usize,
    target_offset: usize,
    /// Target vertices (unshifted) per source vertex, by diagonal colour.
    candidates: Vec<Vec<usize>>,
}

impl<'a> Matcher<'a> {
    fn new(colour: &'a PairColouring, n: usize, target_offset: usize) -> Self {
        let candidates = (0..n)
            .map(|s| {
                (0..n)
                    .filter(|&t| colour.vertex_colour(s) == colour.vertex_colour(target_offset + t))
                    .collect()
            })
            .collect();
        Matcher {
            colour,
            n,
            target_offset,
            candidates,
        }
    }

    fn consistent(&self, map: &[usize], assigned: &[usize], s: usize, t: usize) -> bool {
        let off = self.target_offset;
        let c = self.colour;
        assigned.iter().all(|&s2| {
            let t2 = map[s2];
            c.get(s2, s) == c.get(off + t2, off + t) && c.get(s, s2) == c.get(off + t, off + t2)
        })
    }

    /// Complete `fixed` (source → target pairs) to a full colour-preserving
    /// bijection, or report that none exists.
    fn extend(&self, fixed: &[(usize, usize)]) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        let mut assigned = Vec::with_capacity(self.n);
        for &(s, t) in fixed {
            if !self.candidates[s].contains(&t) || used[t] || !self.consistent(&map, &assigned, s, t) {
                return None;
            }
            map[s] = t;
            used[t] = true;
            assigned.push(s);
        }
        let rest: Vec<usize> = (0..self.n).filter(|&s| map[s] == usize::MAX).collect();
        self.search(&rest, 0, &mut map, &mut used, &mut assigned)
            .then_some(map)
    }

    fn search(
        &self,
        rest: &[usize],
        depth: usize,
        map: &mut [usize],
        used: &mut [bool],
        assigned: &mut Vec<usize>,
    ) -> bool {
        let Some(&s) = rest.get(depth) else {
            return true;
        };
        for &t in &self.candidates[s] {
            if used[t] || !self.consistent(map, assigned, s, t) {
                continue;
            }
            map[s] = t;
            used[t] = true;
            assigned.push(s);
            if self.search(rest, depth + 1, map, used, assigned) {
                return true;
            }
            assigned.pop();
            used[t] = false;
            map[s] = usize::MAX;
        }
        false
    }
}

fn check_bound(n: usize, bound: usize) -> Result<(), OracleError> {
    if n > bound {
        Err(OracleError::BoundExceeded { n, bound })
    } else {
        Ok(())
    }
}

/// `Aut(g)` for graphs with at most `bound` vertices.
pub fn automorphisms(g: &Graph, bound: usize) -> Result<PermGroup, OracleError> {
    let n = g.n();
    check_bound(n, bound)?;
    let colour = stable_partition(g);
    let matcher = Matcher::new(&colour, n, 0);

    let mut generators: Vec<Permutation> = Vec::new();
    let mut order: u128 = 1;
    // Walk the stabiliser chain bottom-up so that generators of deeper
    // stabilisers are available when closing the orbit at level k.
    for k in (0..n).rev() {
        let mut orbit = orbit_of(k, &generators);
        for w in k + 1..n {
            if orbit.contains(&w) || !matcher.candidates[k].contains(&w) {
                continue;
            }
            let mut fixed: Vec<(usize, usize)> = (0..k).map(|i| (i, i)).collect();
            fixed.push((k, w));
            if let Some(map) = matcher.extend(&fixed) {
                let p = Permutation(map);
                debug_assert!(p.is_automorphism(g));
                generators.push(p);
                orbit = orbit_of(k, &generators);
            }
        }
        order = order
            .checked_mul(orbit.len() as u128)
            .expect("order of a group on at most 34 points fits in u128");
    }
    Ok(PermGroup { n, generators, order })
}

fn orbit_of(point: usize, generators: &[Permutation]) -> BTreeSet<usize> {
    let mut orbit = BTreeSet::from([point]);
    let mut queue = VecDeque::from([point]);
    while let Some(p) = queue.pop_front() {
        for g in generators {
            let q = g.apply(p);
            if orbit.insert(q) {
                queue.push_back(q);
            }
        }
    }
    orbit
}

/// An isomorphism `a → b` as the image list of `a`'s vertices.
pub fn find_isomorphism(a: &Graph, b: &Graph, bound: usize) -> Result<Option<Vec<usize>>, OracleError> {
    check_bound(a.n(), bound)?;
    check_bound(b.n(), bound)?;
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return Ok(None);
    }
    let n = a.n();
    let (union, _) = disjoint_union(&[a.clone(), b.clone()]).expect("two factors");
    let colour = stable_partition(&union);
    let histogram = |lo: usize| {
        let mut h: HashMap<u32, usize> = HashMap::new();
        for u in lo..lo + n {
            for v in lo..lo + n {
                *h.entry(colour.get(u, v)).or_default() += 1;
            }
        }
        h
    };
    if histogram(0) != histogram(n) {
        return Ok(None);
    }
    Ok(Matcher::new(&colour, n, n).extend(&[]))
}

pub fn is_isomorphic(a: &Graph, b: &Graph, bound: usize) -> Result<bool, OracleError> {
    Ok(find_isomorphism(a, b, bound)?.is_some())
}

pub fn is_vertex_transitive(g: &Graph, bound: usize) -> Result<bool, OracleError> {
    Ok(automorphisms(g, bound)?.orbits().len() <= 1)
}

/// Tri-state answer for questions the oracle may be unable to settle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// Classical vertex transitivity; `Unknown` above the oracle bound.
pub fn vertex_transitivity(g: &Graph, bound: usize) -> Verdict {
    match is_vertex_transitive(g, bound) {
        Ok(true) => Verdict::Yes,
        Ok(false) => Verdict::No,
        Err(_) => Verdict::Unknown,
    }
}

/// Quantum vertex transitivity as far as it can be certified: classical
/// transitivity implies it, more than one stable WL vertex class rules it
/// out, anything else is `Unknown`.
pub fn quantum_vertex_transitivity(g: &Graph, bound: usize) -> Verdict {
    match vertex_transitivity(g, bound) {
        Verdict::Yes => Verdict::Yes,
        _ if stable_partition(g).vertex_class_count() > 1 => Verdict::No,
        _ => Verdict::Unknown,
    }
}

/// `|H ≀ G| = |H|^{|Ω|} · |G|` for `G` acting on `|Ω| = points` points.
pub fn wreath_order(inner_order: u128, points: usize, outer_order: u128) -> Result<BigUint, OracleError> {
    if inner_order == 0 || outer_order == 0 || points == 0 {
        return Err(OracleError::NonPositive);
    }
    Ok(BigUint::from(inner_order).pow(points as u32) * BigUint::from(outer_order))
}
