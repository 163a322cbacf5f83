//! Two-dimensional Weisfeiler–Leman refinement on ordered vertex pairs.
//!
//! A [`PairColouring`] assigns a colour id to every ordered pair `(u, v)`.
//! One refinement round recolours `(x, y)` by its old colour together with
//! the full profile of counts `Δ_ij(x, y) = |{z : c(x,z) = i, c(z,y) = j}|`.
//! Colour ids are always canonical: after a round, ids are handed out in
//! order of first appearance when scanning pairs row-major.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::WlError;
use crate::graph::{lex_product, Graph, ProductVertex};
use crate::par::Exec;

/// Rows below this size are refined sequentially even under `Exec::Parallel`.
const PARALLEL_MIN_VERTICES: usize = 24;

pub type Pair = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairColouring {
    n: usize,
    colour: Vec<u32>,
    num_colours: usize,
}

impl PairColouring {
    /// Canonically renamed colouring from arbitrary raw keys given row-major.
    pub fn from_raw<K: Eq + std::hash::Hash>(n: usize, raw: Vec<K>) -> Self {
        assert_eq!(raw.len(), n * n);
        let mut ids: HashMap<K, u32> = HashMap::new();
        let mut colour = Vec::with_capacity(n * n);
        for key in raw {
            let next = ids.len() as u32;
            colour.push(*ids.entry(key).or_insert(next));
        }
        PairColouring {
            n,
            colour,
            num_colours: ids.len(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn num_colours(&self) -> usize {
        self.num_colours
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.colour[u * self.n + v]
    }

    pub fn vertex_colour(&self, v: usize) -> u32 {
        self.get(v, v)
    }

    /// Number of distinct diagonal colours.
    pub fn vertex_class_count(&self) -> usize {
        (0..self.n)
            .map(|v| self.vertex_colour(v))
            .collect::<HashSet<_>>()
            .len()
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.colour.chunks(self.n.max(1)).map(<[u32]>::to_vec).collect()
    }

    /// Colour classes as lists of ordered pairs, indexed by colour id.
    pub fn classes(&self) -> Vec<Vec<Pair>> {
        let mut out = vec![Vec::new(); self.num_colours];
        for u in 0..self.n {
            for v in 0..self.n {
                out[self.get(u, v) as usize].push((u, v));
            }
        }
        out
    }

    /// Whether both colourings induce the same partition of pairs.
    pub fn same_partition(&self, other: &PairColouring) -> bool {
        self.n == other.n && self.num_colours == other.num_colours && self.refines(other)
    }

    /// Whether every class of `self` lies inside one class of `coarser`.
    pub fn refines(&self, coarser: &PairColouring) -> bool {
        if self.n != coarser.n {
            return false;
        }
        let mut image: Vec<Option<u32>> = vec![None; self.num_colours];
        self.colour
            .iter()
            .zip(&coarser.colour)
            .all(|(&a, &b)| *image[a as usize].get_or_insert(b) == b)
    }

    fn check_pair(&self, (u, v): Pair) -> Result<(), WlError> {
        if u < self.n && v < self.n {
            Ok(())
        } else {
            Err(WlError::PairOutOfRange(u, v))
        }
    }
}

/// Colour 0 on the diagonal, 1 on edges, 2 on non-edges; absent classes are
/// dropped without reordering the rest, so `K_n` uses {0, 1} and the edgeless
/// graph uses {0, 1} with 1 meaning non-edge.
pub fn initial_colouring(g: &Graph) -> PairColouring {
    let n = g.n();
    let (edge, nonedge) = initial_colour_ids(g);
    let mut colour = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in 0..n {
            colour.push(if u == v {
                0
            } else if g.has_edge(u, v) {
                edge.unwrap()
            } else {
                nonedge.unwrap()
            });
        }
    }
    let num_colours = 1 + usize::from(edge.is_some()) + usize::from(nonedge.is_some());
    PairColouring {
        n,
        colour,
        num_colours: if n == 0 { 0 } else { num_colours },
    }
}

/// Ids of the edge and non-edge classes in [`initial_colouring`].
pub fn initial_colour_ids(g: &Graph) -> (Option<u32>, Option<u32>) {
    let n = g.n();
    let edges = g.edge_count();
    let has_edge = edges > 0;
    let has_nonedge = edges < n * n.saturating_sub(1) / 2;
    let edge = has_edge.then_some(1);
    let nonedge = has_nonedge.then_some(1 + u32::from(has_edge));
    (edge, nonedge)
}

pub fn refine_step(g: &Graph, c: &PairColouring) -> Result<PairColouring, WlError> {
    refine_step_with(g, c, Exec::default())
}

/// One refinement round. The result is identical for every `exec`.
pub fn refine_step_with(g: &Graph, c: &PairColouring, exec: Exec) -> Result<PairColouring, WlError> {
    let n = g.n();
    if c.n() != n {
        return Err(WlError::SizeMismatch {
            colouring: c.n(),
            graph: n,
        });
    }
    let exec = if n < PARALLEL_MIN_VERTICES {
        Exec::Sequential
    } else {
        exec
    };
    let rows: Vec<Vec<Vec<u64>>> = exec.map_range(n, |x| {
        let mut scratch = Vec::with_capacity(n);
        (0..n).map(|y| signature(c, x, y, &mut scratch)).collect()
    });
    Ok(PairColouring::from_raw(n, rows.into_iter().flatten().collect()))
}

/// `[old colour, (i<<32|j), count, ...]` with the `(i, j)` keys ascending.
fn signature(c: &PairColouring, x: usize, y: usize, scratch: &mut Vec<u64>) -> Vec<u64> {
    scratch.clear();
    scratch.extend((0..c.n()).map(|z| u64::from(c.get(x, z)) << 32 | u64::from(c.get(z, y))));
    scratch.sort_unstable();
    let mut sig = vec![u64::from(c.get(x, y))];
    for run in scratch.chunk_by(|a, b| a == b) {
        sig.push(run[0]);
        sig.push(run.len() as u64);
    }
    sig
}

/// Colourings from `c₀` through the first round whose refinement induces the
/// same partition; the final entry is that confirming refinement.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RefinementTrace {
    pub rounds: Vec<PairColouring>,
    /// First index `k` with `rounds[k]` and `rounds[k + 1]` inducing the same partition.
    pub stable_round: usize,
}

impl RefinementTrace {
    pub fn stable(&self) -> &PairColouring {
        self.rounds.last().expect("trace is never empty")
    }

    /// Refinement rounds executed, including the confirming one.
    pub fn refinement_count(&self) -> usize {
        self.rounds.len() - 1
    }

    pub fn into_stable(mut self) -> PairColouring {
        self.rounds.pop().expect("trace is never empty")
    }
}

pub fn stable_colouring(g: &Graph) -> RefinementTrace {
    stable_colouring_with(g, Exec::default())
}

pub fn stable_colouring_with(g: &Graph, exec: Exec) -> RefinementTrace {
    let mut rounds = vec![initial_colouring(g)];
    loop {
        let last = rounds.last().unwrap();
        let next = refine_step_with(g, last, exec).expect("sizes agree by construction");
        let stable = next.same_partition(last);
        rounds.push(next);
        if stable {
            let stable_round = rounds.len() - 2;
            return RefinementTrace { rounds, stable_round };
        }
    }
}

/// Stable colouring only, without keeping intermediate rounds.
pub fn stable_partition(g: &Graph) -> PairColouring {
    stable_partition_with(g, Exec::default())
}

pub fn stable_partition_with(g: &Graph, exec: Exec) -> PairColouring {
    let mut current = initial_colouring(g);
    loop {
        let next = refine_step_with(g, &current, exec).expect("sizes agree by construction");
        if next.same_partition(&current) {
            return next;
        }
        current = next;
    }
}

pub fn distinguished(c: &PairColouring, p1: Pair, p2: Pair) -> bool {
    c.get(p1.0, p1.1) != c.get(p2.0, p2.1)
}

/// Colour sets of the two orientations of `e1` and `e2` are disjoint.
pub fn strongly_distinguished(c: &PairColouring, e1: Pair, e2: Pair) -> Result<bool, WlError> {
    for (p, q) in [e1, e2] {
        c.check_pair((p, q))?;
        if p == q {
            return Err(WlError::DiagonalPair(p, q));
        }
    }
    let a = [c.get(e1.0, e1.1), c.get(e1.1, e1.0)];
    let b = [c.get(e2.0, e2.1), c.get(e2.1, e2.0)];
    Ok(!a.iter().any(|x| b.contains(x)))
}

/// All counts `Δ_ij(p, q)` with their colour pair `(i, j)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleProfile {
    pub counts: BTreeMap<(u32, u32), usize>,
}

impl TriangleProfile {
    pub fn get(&self, i: u32, j: u32) -> usize {
        self.counts.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }
}

pub fn triangle_counts(g: &Graph, c: &PairColouring, p: usize, q: usize) -> Result<TriangleProfile, WlError> {
    if c.n() != g.n() {
        return Err(WlError::SizeMismatch {
            colouring: c.n(),
            graph: g.n(),
        });
    }
    c.check_pair((p, q))?;
    let mut counts = BTreeMap::new();
    for z in 0..g.n() {
        *counts.entry((c.get(p, z), c.get(z, q))).or_insert(0) += 1;
    }
    Ok(TriangleProfile { counts })
}

/// The four first-round counts over the edge (1) and non-edge (2) classes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeTriangleCounts {
    pub d11: usize,
    pub d12: usize,
    pub d21: usize,
    pub d22: usize,
}

impl EdgeTriangleCounts {
    /// Project a profile taken under [`initial_colouring`] onto edge/non-edge ids.
    pub fn from_profile(profile: &TriangleProfile, edge: Option<u32>, nonedge: Option<u32>) -> Self {
        let get = |i: Option<u32>, j: Option<u32>| match (i, j) {
            (Some(i), Some(j)) => profile.get(i, j),
            _ => 0,
        };
        EdgeTriangleCounts {
            d11: get(edge, edge),
            d12: get(edge, nonedge),
            d21: get(nonedge, edge),
            d22: get(nonedge, nonedge),
        }
    }
}

/// Closed-form first-round counts for an edge `pq` of `x[y]`, computed from
/// neighbourhoods of the factors alone.
pub fn edge_triangle_closed_form(
    x: &Graph,
    y: &Graph,
    p: ProductVertex,
    q: ProductVertex,
) -> Result<EdgeTriangleCounts, WlError> {
    for v in [p, q] {
        x.check_vertex(v.x)?;
        y.check_vertex(v.y)?;
    }
    let n = y.n();
    let (xc, yc) = (x.complement(), y.complement());
    let cross = |a: &Graph, u: usize, b: &Graph, v: usize| -> usize {
        a.row(u)
            .iter()
            .zip(b.row(v))
            .map(|(s, t)| (s & t).count_ones() as usize)
            .sum()
    };
    if p.x == q.x {
        if !y.has_edge(p.y, q.y) {
            return Err(WlError::NotAnEdge);
        }
        let v = p.x;
        Ok(EdgeTriangleCounts {
            d11: cross(y, p.y, y, q.y) + x.degree(v) * n,
            d12: cross(y, p.y, &yc, q.y),
            d21: cross(&yc, p.y, y, q.y),
            d22: cross(&yc, p.y, &yc, q.y) + xc.degree(v) * n,
        })
    } else {
        if !x.has_edge(p.x, q.x) {
            return Err(WlError::NotAnEdge);
        }
        Ok(EdgeTriangleCounts {
            d11: y.degree(p.y) + y.degree(q.y) + cross(x, p.x, x, q.x) * n,
            d12: yc.degree(q.y) + cross(x, p.x, &xc, q.x) * n,
            d21: yc.degree(p.y) + cross(&xc, p.x, x, q.x) * n,
            d22: cross(&xc, p.x, &xc, q.x) * n,
        })
    }
}

/// Direct first-round counts for the pair `(p, q)` of `x[y]`.
pub fn edge_triangle_direct(
    x: &Graph,
    y: &Graph,
    p: ProductVertex,
    q: ProductVertex,
) -> Result<EdgeTriangleCounts, WlError> {
    let z = lex_product(x, y)?;
    let c0 = initial_colouring(&z);
    let (edge, nonedge) = initial_colour_ids(&z);
    let profile = triangle_counts(&z, &c0, p.flat(y.n()), q.flat(y.n()))?;
    Ok(EdgeTriangleCounts::from_profile(&profile, edge, nonedge))
}

/// A colour word of length `len` along which the walk counts differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathWitness {
    pub len: usize,
    pub word: Vec<u32>,
    pub src_walks: String,
    pub dst_walks: String,
}

/// Number of walks `from = x_0, …, x_ℓ = to` with `c(x_{i-1}, x_i) = word[i-1]`.
pub fn walk_count(c: &PairColouring, from: usize, to: usize, word: &[u32]) -> BigUint {
    let mut counts = unit(c.n(), from);
    for &b in word {
        counts = step(c, &counts, b);
    }
    counts[to].clone()
}

fn unit(n: usize, at: usize) -> Vec<BigUint> {
    let mut v = vec![BigUint::ZERO; n];
    v[at] = BigUint::from(1u8);
    v
}

fn step(c: &PairColouring, counts: &[BigUint], colour: u32) -> Vec<BigUint> {
    let n = c.n();
    let mut next = vec![BigUint::ZERO; n];
    for (v, cv) in counts.iter().enumerate() {
        if *cv == BigUint::ZERO {
            continue;
        }
        for (w, slot) in next.iter_mut().enumerate() {
            if c.get(v, w) == colour {
                *slot += cv;
            }
        }
    }
    next
}

/// Shortest (then lexicographically smallest) colour word of length at most
/// `max_len` whose walk counts from `src.0` to `src.1` and from `dst.0` to
/// `dst.1` differ. Any witness implies the pairs receive different stable
/// colours.
pub fn profile_distinguish(c: &PairColouring, src: Pair, dst: Pair, max_len: usize) -> Option<PathWitness> {
    let n = c.n();
    let colours = c.num_colours() as u32;
    type State = (Vec<BigUint>, Vec<BigUint>);
    let mut frontier: Vec<(Vec<u32>, State)> = vec![(Vec::new(), (unit(n, src.0), unit(n, dst.0)))];
    let mut seen: HashSet<State> = HashSet::new();
    for len in 1..=max_len {
        let mut next = Vec::new();
        for (word, (a, b)) in &frontier {
            for colour in 0..colours {
                let a2 = step(c, a, colour);
                let b2 = step(c, b, colour);
                let mut w = word.clone();
                w.push(colour);
                if a2[src.1] != b2[dst.1] {
                    return Some(PathWitness {
                        len,
                        word: w,
                        src_walks: a2[src.1].to_string(),
                        dst_walks: b2[dst.1].to_string(),
                    });
                }
                let zero = |v: &[BigUint]| v.iter().all(|x| *x == BigUint::ZERO);
                if zero(&a2) && zero(&b2) {
                    continue;
                }
                let state = (a2, b2);
                if seen.insert(state.clone()) {
                    next.push((w, state));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    None
}
