//! Symbolic group expressions with a canonical, byte-stable rendering.
//!
//! Leaves refer to graphs by content hash. Only the rewrite rules in
//! [`GroupExpr::simplify`] are ever applied; no algebraic identities beyond
//! those are assumed.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::graph::Graph;
use crate::io::{content_hash, to_graph6, to_text};

#[derive(Clone, Debug)]
pub struct GraphRef {
    graph: Arc<Graph>,
    hash: String,
}

impl GraphRef {
    pub fn new(graph: &Graph) -> Self {
        GraphRef {
            hash: content_hash(graph),
            graph: Arc::new(graph.clone()),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }
}

impl PartialEq for GraphRef {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
    }
}

impl Eq for GraphRef {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupExpr {
    /// Quantum automorphism group of a graph.
    Qut(GraphRef),
    /// Classical automorphism group of a graph.
    Aut(GraphRef),
    /// Quantum symmetric group on `n` points.
    SPlus(usize),
    /// Symmetric group on `n` points.
    S(usize),
    /// `inner ≀* outer`.
    FreeWreath(Box<GroupExpr>, Box<GroupExpr>),
    /// `inner ≀ outer`.
    Wreath(Box<GroupExpr>, Box<GroupExpr>),
    FreeProd(Vec<GroupExpr>),
    Indeterminate(String),
}

impl GroupExpr {
    pub fn qut(g: &Graph) -> Self {
        GroupExpr::Qut(GraphRef::new(g))
    }

    pub fn aut(g: &Graph) -> Self {
        GroupExpr::Aut(GraphRef::new(g))
    }

    pub fn s_plus(n: usize) -> Self {
        assert!(n >= 1, "S+(n) needs n >= 1");
        GroupExpr::SPlus(n)
    }

    pub fn sym(n: usize) -> Self {
        assert!(n >= 1, "S(n) needs n >= 1");
        GroupExpr::S(n)
    }

    pub fn free_wreath(inner: GroupExpr, outer: GroupExpr) -> Self {
        GroupExpr::FreeWreath(Box::new(inner), Box::new(outer))
    }

    pub fn wreath(inner: GroupExpr, outer: GroupExpr) -> Self {
        GroupExpr::Wreath(Box::new(inner), Box::new(outer))
    }

    pub fn free_prod(children: Vec<GroupExpr>) -> Self {
        assert!(children.len() >= 2, "free product needs at least two factors");
        GroupExpr::FreeProd(children)
    }

    pub fn indeterminate(reason: impl Into<String>) -> Self {
        GroupExpr::Indeterminate(reason.into())
    }

    pub fn is_indeterminate(&self) -> bool {
        matches!(self, GroupExpr::Indeterminate(_))
    }

    pub fn contains_indeterminate(&self) -> bool {
        match self {
            GroupExpr::Indeterminate(_) => true,
            GroupExpr::FreeWreath(a, b) | GroupExpr::Wreath(a, b) => {
                a.contains_indeterminate() || b.contains_indeterminate()
            }
            GroupExpr::FreeProd(cs) => cs.iter().any(GroupExpr::contains_indeterminate),
            _ => false,
        }
    }

    /// Rewrite to the fixed point of:
    /// `Qut(K₁) → S+(1)`, `Qut(Kₙ), Qut(K̄ₙ) → S+(n)` (and `Aut` → `S`),
    /// `e ≀* S+(1) → e`, `S+(1) ≀* e → e` (and `≀`/`S` likewise),
    /// trivial factors dropped from free products, a single remaining
    /// factor unwrapped.
    pub fn simplify(&self) -> GroupExpr {
        use GroupExpr::*;
        match self {
            Qut(r) if r.graph.is_edgeless() || r.graph.is_complete() => SPlus(r.graph.n()),
            Aut(r) if r.graph.is_edgeless() || r.graph.is_complete() => S(r.graph.n()),
            FreeWreath(a, b) => match (a.simplify(), b.simplify()) {
                (e, SPlus(1)) | (SPlus(1), e) => e,
                (a, b) => GroupExpr::free_wreath(a, b),
            },
            Wreath(a, b) => match (a.simplify(), b.simplify()) {
                (e, S(1)) | (S(1), e) => e,
                (a, b) => GroupExpr::wreath(a, b),
            },
            FreeProd(cs) => {
                let mut kept: Vec<GroupExpr> = cs
                    .iter()
                    .map(GroupExpr::simplify)
                    .filter(|c| !matches!(c, SPlus(1) | S(1)))
                    .collect();
                match kept.len() {
                    0 => SPlus(1),
                    1 => kept.pop().unwrap(),
                    _ => FreeProd(kept),
                }
            }
            other => other.clone(),
        }
    }

    /// Read every quantum construction classically: `S+ → S`, `Qut → Aut`,
    /// `≀* → ≀`; a free product of quantum automorphism groups of pairwise
    /// non-isomorphic components becomes the direct product.
    pub fn to_classical(&self) -> GroupExpr {
        use GroupExpr::*;
        match self {
            Qut(r) | Aut(r) => Aut(r.clone()),
            SPlus(n) | S(n) => S(*n),
            FreeWreath(a, b) | Wreath(a, b) => GroupExpr::wreath(a.to_classical(), b.to_classical()),
            FreeProd(cs) => FreeProd(cs.iter().map(GroupExpr::to_classical).collect()),
            Indeterminate(r) => Indeterminate(r.clone()),
        }
    }

    /// Number of points acted on. Defined for expressions that have not been
    /// through `simplify` (dropping trivial free factors changes it).
    pub fn degree(&self) -> Option<usize> {
        use GroupExpr::*;
        match self {
            Qut(r) | Aut(r) => Some(r.graph.n()),
            SPlus(n) | S(n) => Some(*n),
            FreeWreath(a, b) | Wreath(a, b) => Some(a.degree()? * b.degree()?),
            FreeProd(cs) => cs.iter().map(GroupExpr::degree).sum(),
            Indeterminate(_) => None,
        }
    }

    /// Order of the classical reading of the expression, with leaf orders
    /// supplied by `leaf`. `None` if a leaf is unknown or the expression is
    /// indeterminate.
    pub fn classical_order<F>(&self, leaf: &mut F) -> Option<BigUint>
    where
        F: FnMut(&Graph) -> Option<u128>,
    {
        use GroupExpr::*;
        match self {
            Qut(r) | Aut(r) => leaf(&r.graph).map(BigUint::from),
            SPlus(n) | S(n) => Some((1..=*n as u64).map(BigUint::from).product()),
            FreeWreath(a, b) | Wreath(a, b) => {
                let inner = a.classical_order(leaf)?;
                let outer = b.classical_order(leaf)?;
                Some(inner.pow(b.degree()? as u32) * outer)
            }
            FreeProd(cs) => cs.iter().map(|c| c.classical_order(leaf)).product(),
            Indeterminate(_) => None,
        }
    }

    /// Leaf graphs by hash.
    pub fn graphs(&self) -> BTreeMap<String, &Graph> {
        let mut out = BTreeMap::new();
        self.collect_graphs(&mut out);
        out
    }

    fn collect_graphs<'a>(&'a self, out: &mut BTreeMap<String, &'a Graph>) {
        match self {
            GroupExpr::Qut(r) | GroupExpr::Aut(r) => {
                out.insert(r.hash.clone(), &r.graph);
            }
            GroupExpr::FreeWreath(a, b) | GroupExpr::Wreath(a, b) => {
                a.collect_graphs(out);
                b.collect_graphs(out);
            }
            GroupExpr::FreeProd(cs) => cs.iter().for_each(|c| c.collect_graphs(out)),
            _ => {}
        }
    }

    pub fn to_json(&self) -> Value {
        use GroupExpr::*;
        match self {
            Qut(r) => json!({"op": "qut", "graph": r.hash}),
            Aut(r) => json!({"op": "aut", "graph": r.hash}),
            SPlus(n) => json!({"op": "s_plus", "n": n}),
            S(n) => json!({"op": "s", "n": n}),
            FreeWreath(a, b) => json!({"op": "free_wreath", "args": [a.to_json(), b.to_json()]}),
            Wreath(a, b) => json!({"op": "wreath", "args": [a.to_json(), b.to_json()]}),
            FreeProd(cs) => {
                json!({"op": "free_prod", "args": cs.iter().map(GroupExpr::to_json).collect::<Vec<_>>()})
            }
            Indeterminate(r) => json!({"op": "indeterminate", "reason": r}),
        }
    }

    /// Leaf graphs as `{hash: {"graph6": …, "text": …}}`.
    pub fn graphs_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .graphs()
            .into_iter()
            .map(|(h, g)| (h, json!({"graph6": to_graph6(g), "text": to_text(g)})))
            .collect();
        Value::Object(map)
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GroupExpr::*;
        match self {
            Qut(r) => write!(f, "Qut({})", r.hash),
            Aut(r) => write!(f, "Aut({})", r.hash),
            SPlus(n) => write!(f, "S+({n})"),
            S(n) => write!(f, "S({n})"),
            FreeWreath(a, b) => write!(f, "FreeWreath({a},{b})"),
            Wreath(a, b) => write!(f, "Wreath({a},{b})"),
            FreeProd(cs) => {
                f.write_str("FreeProd(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
            Indeterminate(r) => write!(f, "Indeterminate({r})"),
        }
    }
}
