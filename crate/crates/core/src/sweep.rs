//! Exhaustive check of the classical wreath criterion over pairs of small
//! graphs: `|Aut(X[Y])| = |Aut(Y)|^{|V(X)|}·|Aut(X)|` exactly when both
//! conditions hold, and the left side is strictly larger otherwise.

use num_bigint::BigUint;
use serde::Serialize;

use crate::analysis::sabidussi_conditions;
use crate::enumerate::{unlabelled_graphs, MAX_ENUMERATION_ORDER};
use crate::error::Error;
use crate::graph::{lex_product, Graph};
use crate::group::{automorphisms, wreath_order, DEFAULT_BOUND};
use crate::io::to_graph6;
use crate::par::Exec;

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub max_nx: usize,
    pub max_ny: usize,
    /// Oracle bound on the product order; larger products are skipped.
    pub bound: usize,
    /// Graphs to draw factors from instead of the built-in enumeration.
    pub corpus: Option<Vec<Graph>>,
    pub exec: Exec,
}

impl SweepOptions {
    pub fn new(max_nx: usize, max_ny: usize) -> Self {
        SweepOptions {
            max_nx,
            max_ny,
            bound: DEFAULT_BOUND,
            corpus: None,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStatus {
    Verified,
    SkippedBound,
    Counterexample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairRecord {
    pub x: String,
    pub y: String,
    pub status: PairStatus,
    pub wreath_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aut_order: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wreath_order: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub pairs: usize,
    pub verified: usize,
    pub skipped_bound: usize,
    pub conditions_hold: usize,
    pub conditions_fail: usize,
    pub counterexamples: usize,
    pub records: Vec<PairRecord>,
}

/// Check one pair. The result is `Counterexample` when the order equality
/// disagrees with the conditions or a failing pair does not show a strict
/// increase.
pub fn check_pair(x: &Graph, y: &Graph, bound: usize) -> PairRecord {
    let cond = sabidussi_conditions(x, y);
    let mut rec = PairRecord {
        x: to_graph6(x),
        y: to_graph6(y),
        status: PairStatus::SkippedBound,
        wreath_holds: cond.wreath_holds,
        aut_order: None,
        wreath_order: None,
    };
    if x.n() * y.n() > bound {
        return rec;
    }
    let product = lex_product(x, y).expect("non-empty factors");
    let orders = (|| {
        let p = automorphisms(&product, bound).ok()?.order();
        let ax = automorphisms(x, bound).ok()?.order();
        let ay = automorphisms(y, bound).ok()?.order();
        Some((p, wreath_order(ay, x.n(), ax).ok()?))
    })();
    let Some((p, w)) = orders else {
        return rec;
    };
    let p_big = BigUint::from(p);
    let ok = if cond.wreath_holds { p_big == w } else { p_big > w };
    rec.status = if ok {
        PairStatus::Verified
    } else {
        PairStatus::Counterexample
    };
    rec.aut_order = Some(p);
    rec.wreath_order = Some(w.to_string());
    rec
}

fn factors(opts: &SweepOptions, max_n: usize) -> Result<Vec<Graph>, Error> {
    match &opts.corpus {
        Some(c) => Ok(c.iter().filter(|g| g.n() <= max_n).cloned().collect()),
        None => {
            if max_n > MAX_ENUMERATION_ORDER {
                return Err(Error::Sweep(format!(
                    "bound {max_n} exceeds the enumeration limit {MAX_ENUMERATION_ORDER}; supply a corpus"
                )));
            }
            let mut out = Vec::new();
            for n in 1..=max_n {
                out.extend(unlabelled_graphs(n).expect("within limit"));
            }
            Ok(out)
        }
    }
}

/// Run the sweep. Pairs are checked concurrently and reported in
/// enumeration order; any counterexample aborts with an error naming both
/// factors in graph6.
pub fn sweep(opts: &SweepOptions) -> Result<SweepSummary, Error> {
    if opts.max_nx == 0 || opts.max_ny == 0 {
        return Err(Error::Sweep("bounds must be at least 1".into()));
    }
    let xs = factors(opts, opts.max_nx)?;
    let ys = factors(opts, opts.max_ny)?;
    let pairs: Vec<(&Graph, &Graph)> = xs.iter().flat_map(|x| ys.iter().map(move |y| (x, y))).collect();
    let records = opts.exec.map_slice(&pairs, |(x, y)| check_pair(x, y, opts.bound));

    let mut s = SweepSummary {
        pairs: records.len(),
        ..SweepSummary::default()
    };
    for r in &records {
        match r.status {
            PairStatus::Verified => s.verified += 1,
            PairStatus::SkippedBound => s.skipped_bound += 1,
            PairStatus::Counterexample => s.counterexamples += 1,
        }
        if r.wreath_holds {
            s.conditions_hold += 1;
        } else {
            s.conditions_fail += 1;
        }
    }
    if let Some(bad) = records.iter().find(|r| r.status == PairStatus::Counterexample) {
        return Err(Error::Sweep(format!(
            "counterexample: X = {} Y = {} (conditions {}, |Aut(X[Y])| = {}, wreath order {})",
            bad.x,
            bad.y,
            if bad.wreath_holds { "hold" } else { "fail" },
            bad.aut_order.unwrap_or_default(),
            bad.wreath_order.as_deref().unwrap_or("?"),
        )));
    }
    s.records = records;
    Ok(s)
}
