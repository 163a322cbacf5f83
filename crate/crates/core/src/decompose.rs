//! Structure of graphs that fail the wreath conditions: twin quotients,
//! component decompositions, the disjoint-union rules for quantum
//! automorphism groups, and the vertex-transitive product formula.

use serde::Serialize;

use crate::analysis::sabidussi_conditions;
use crate::error::DecompositionError;
use crate::expr::GroupExpr;
use crate::graph::{disjoint_union, lex_product, Graph};
use crate::group::{find_isomorphism, quantum_vertex_transitivity, vertex_transitivity, Verdict};
use crate::wl::stable_partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionKind {
    TwinQuotient,
    ComplementTwinQuotient,
    Components,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub kind: DecompositionKind,
    /// `X′` with `g = X′[K̄_α]` (or `X′[K_α]` for the complement pathway).
    pub quotient: Option<Graph>,
    /// α for quotients, β for components.
    pub alpha_or_beta: Option<usize>,
    /// `Y′` with `g = K̄_β[Y′]`.
    pub inner_factor: Option<Graph>,
    /// `None` when the oracle bound prevented the check.
    pub pairwise_isomorphic: Option<bool>,
    pub components: Option<Vec<Vec<usize>>>,
    /// The reconstruction from the factors matched the input exactly under
    /// the canonical vertex matching.
    pub reconstruction_verified: Option<bool>,
}

impl DecompositionReport {
    fn none() -> Self {
        DecompositionReport {
            kind: DecompositionKind::None,
            quotient: None,
            alpha_or_beta: None,
            inner_factor: None,
            pairwise_isomorphic: None,
            components: None,
            reconstruction_verified: None,
        }
    }
}

/// Write `g = X′[K̄_α]` by collapsing twin classes, when all classes share
/// one size `α ≥ 2`. The quotient is twin-free, so `α` is maximal.
pub fn twin_quotient(g: &Graph) -> DecompositionReport {
    let tp = g.twin_partition();
    let alpha = match tp.uniform_size {
        Some(a) if a >= 2 => a,
        _ => return DecompositionReport::none(),
    };
    let k = tp.classes.len();
    let mut quotient = Graph::empty(k);
    for i in 0..k {
        for j in i + 1..k {
            if g.has_edge(tp.classes[i][0], tp.classes[j][0]) {
                quotient.set_edge(i, j);
            }
        }
    }
    // Product vertex (i, a) ↦ a-th member of class i.
    let matching: Vec<usize> = tp.classes.iter().flatten().copied().collect();
    let rebuilt = lex_product(&quotient, &Graph::empty(alpha)).expect("non-empty factors");
    let verified = rebuilt.relabel(&matching) == *g;
    debug_assert!(verified);
    DecompositionReport {
        kind: DecompositionKind::TwinQuotient,
        quotient: Some(quotient),
        alpha_or_beta: Some(alpha),
        reconstruction_verified: Some(verified),
        ..DecompositionReport::none()
    }
}

/// Write `g = X′[K_α]` through the twin quotient of the complement.
pub fn complement_twin_quotient(g: &Graph) -> DecompositionReport {
    let inner = twin_quotient(&g.complement());
    let (Some(q), Some(alpha)) = (inner.quotient, inner.alpha_or_beta) else {
        return DecompositionReport::none();
    };
    let quotient = q.complement();
    let tp = g.complement().twin_partition();
    let matching: Vec<usize> = tp.classes.iter().flatten().copied().collect();
    let rebuilt = lex_product(&quotient, &Graph::complete(alpha)).expect("non-empty factors");
    let verified = rebuilt.relabel(&matching) == *g;
    debug_assert!(verified);
    DecompositionReport {
        kind: DecompositionKind::ComplementTwinQuotient,
        quotient: Some(quotient),
        alpha_or_beta: Some(alpha),
        reconstruction_verified: Some(verified),
        ..DecompositionReport::none()
    }
}

/// Write a disconnected `g = K̄_β[Y′]` when its `β` components are pairwise
/// isomorphic.
pub fn component_decomposition(g: &Graph, bound: usize) -> DecompositionReport {
    let comps = g.connected_components();
    if comps.len() < 2 {
        return DecompositionReport {
            components: Some(comps),
            ..DecompositionReport::none()
        };
    }
    let first = g.induced_subgraph(&comps[0]);
    let mut maps = Vec::with_capacity(comps.len());
    let mut pairwise = Some(true);
    for comp in &comps {
        match find_isomorphism(&first, &g.induced_subgraph(comp), bound) {
            Ok(Some(map)) => maps.push(map),
            Ok(None) => {
                pairwise = Some(false);
                break;
            }
            Err(_) => {
                pairwise = None;
                break;
            }
        }
    }
    let mut report = DecompositionReport {
        kind: DecompositionKind::Components,
        pairwise_isomorphic: pairwise,
        alpha_or_beta: Some(comps.len()),
        ..DecompositionReport::none()
    };
    if pairwise == Some(true) {
        let beta = comps.len();
        let ny = first.n();
        let mut matching = vec![0; g.n()];
        for (i, (comp, map)) in comps.iter().zip(&maps).enumerate() {
            for y in 0..ny {
                matching[i * ny + y] = comp[map[y]];
            }
        }
        let rebuilt = lex_product(&Graph::empty(beta), &first).expect("non-empty factors");
        let verified = rebuilt.relabel(&matching) == *g;
        debug_assert!(verified);
        report.inner_factor = Some(first);
        report.reconstruction_verified = Some(verified);
    }
    report.components = Some(comps);
    report
}

/// Quantum automorphism group of a disconnected graph from its components:
/// isomorphic components of multiplicity `m` give `Qut(C) ≀* S+(m)`, distinct
/// classes are combined by free product. When two classes could still be
/// quantum isomorphic (same order and size and equal stable WL colour
/// histograms) the answer is `Indeterminate`.
pub fn qut_disjoint_union(g: &Graph, bound: usize) -> Result<GroupExpr, DecompositionError> {
    let comps = g.connected_components();
    if comps.len() < 2 {
        return Err(DecompositionError::Connected);
    }
    let subgraphs: Vec<Graph> = comps.iter().map(|c| g.induced_subgraph(c)).collect();

    // Isomorphism classes in order of first appearance: (representative, members).
    let mut classes: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, h) in subgraphs.iter().enumerate() {
        let mut placed = false;
        for (rep, members) in classes.iter_mut() {
            if find_isomorphism(&subgraphs[*rep], h, bound)?.is_some() {
                members.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push((i, vec![i]));
        }
    }

    let colour = stable_partition(g);
    let histogram = |comp: &[usize]| {
        let mut h: Vec<u32> = comp
            .iter()
            .flat_map(|&u| comp.iter().map(move |&v| (u, v)))
            .map(|(u, v)| colour.get(u, v))
            .collect();
        h.sort_unstable();
        h
    };
    for (a, (ra, _)) in classes.iter().enumerate() {
        for (rb, _) in &classes[a + 1..] {
            let (ga, gb) = (&subgraphs[*ra], &subgraphs[*rb]);
            if ga.n() == gb.n()
                && ga.edge_count() == gb.edge_count()
                && histogram(&comps[*ra]) == histogram(&comps[*rb])
            {
                return Ok(GroupExpr::indeterminate(
                    "possible quantum isomorphism across classes",
                ));
            }
        }
    }

    let mut factors: Vec<GroupExpr> = classes
        .iter()
        .map(|(rep, members)| {
            let leaf = GroupExpr::qut(&subgraphs[*rep]);
            if members.len() == 1 {
                leaf
            } else {
                GroupExpr::free_wreath(leaf, GroupExpr::s_plus(members.len()))
            }
        })
        .collect();
    Ok(if factors.len() == 1 {
        factors.pop().unwrap()
    } else {
        GroupExpr::free_prod(factors)
    })
}

/// A certified expression for `Qut(g)`, or the reason none is available.
///
/// Pathways, in order: `K₁`, `Kₙ` and `K̄ₙ`; disconnected graphs through the
/// disjoint-union rules; graphs with disconnected complement through the
/// complement; twin-uniform graphs `X′[K̄_α]` and `X′[K_α]` with `α ≥ 2` as
/// `S+(α) ≀* Qut(X′)`. Nested leaves are resolved the same way where possible.
pub fn certified_qut(g: &Graph, bound: usize) -> Result<GroupExpr, String> {
    let n = g.n();
    if n == 0 {
        return Err("graph has no vertices".into());
    }
    if g.is_edgeless() || g.is_complete() {
        return Ok(GroupExpr::s_plus(n));
    }
    if !g.is_connected() {
        let e = qut_disjoint_union(g, bound).map_err(|e| e.to_string())?;
        if let GroupExpr::Indeterminate(reason) = e {
            return Err(reason);
        }
        return Ok(resolve_leaves(&e, bound));
    }
    let gc = g.complement();
    if !gc.is_connected() {
        return certified_qut(&gc, bound);
    }
    for report in [twin_quotient(g), complement_twin_quotient(g)] {
        if let (Some(q), Some(alpha)) = (report.quotient, report.alpha_or_beta) {
            return Ok(GroupExpr::free_wreath(
                GroupExpr::s_plus(alpha),
                resolve_qut(&q, bound),
            ));
        }
    }
    Err("no certified pathway: graph and complement are connected and twin-free".into())
}

/// [`certified_qut`], falling back to the bare `Qut(g)` leaf.
pub fn resolve_qut(g: &Graph, bound: usize) -> GroupExpr {
    certified_qut(g, bound).unwrap_or_else(|_| GroupExpr::qut(g))
}

/// Replace every `Qut` leaf by its certified expression where one exists.
pub fn resolve_leaves(e: &GroupExpr, bound: usize) -> GroupExpr {
    match e {
        GroupExpr::Qut(r) => resolve_qut(r.graph(), bound),
        GroupExpr::FreeWreath(a, b) => {
            GroupExpr::free_wreath(resolve_leaves(a, bound), resolve_leaves(b, bound))
        }
        GroupExpr::FreeProd(cs) => GroupExpr::FreeProd(cs.iter().map(|c| resolve_leaves(c, bound)).collect()),
        other => other.clone(),
    }
}

/// Top-level `Qut(g)`: the simplified certified expression, or
/// `Indeterminate` naming why no pathway applies.
pub fn qut(g: &Graph, bound: usize) -> GroupExpr {
    match certified_qut(g, bound) {
        Ok(e) => e.simplify(),
        Err(reason) => GroupExpr::indeterminate(reason),
    }
}

/// Which wreath condition fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureMode {
    /// `Y` disconnected and `X` has twins.
    Disconnected,
    /// `Ȳ` disconnected and `X̄` has twins.
    ComplementDisconnected,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VtDecomposition {
    pub mode: FailureMode,
    /// Unsimplified expression; leaves are the factors `Y′`, `X′`.
    pub expr: GroupExpr,
    pub alpha: Option<usize>,
    pub beta: Option<usize>,
    pub x_quotient: Option<Graph>,
    pub y_factor: Option<Graph>,
    pub notes: Vec<String>,
}

/// `Qut(X[Y]) = (Qut(Y′) ≀* S+(αβ)) ≀* Qut(X′)` for vertex-transitive `X`, `Y`
/// that fail the wreath conditions, with `X = X′[K̄_α]`, `Y = K̄_β[Y′]` (or the
/// complemented forms) and `α`, `β` maximal.
pub fn analyze_vt_product(x: &Graph, y: &Graph, bound: usize) -> Result<VtDecomposition, DecompositionError> {
    let cond = sabidussi_conditions(x, y);
    if cond.wreath_holds {
        return Err(DecompositionError::Hypothesis(
            "both wreath conditions hold; no decomposition needed".into(),
        ));
    }
    let first = !cond.y_connected && cond.x_has_twins;
    let second = !cond.ybar_connected && cond.xbar_has_twins;
    if first == second {
        return Err(DecompositionError::Hypothesis(
            "exactly one failure mode must hold".into(),
        ));
    }
    let mode = if first {
        FailureMode::Disconnected
    } else {
        FailureMode::ComplementDisconnected
    };
    let mut out = VtDecomposition {
        mode,
        expr: GroupExpr::indeterminate("undecided"),
        alpha: None,
        beta: None,
        x_quotient: None,
        y_factor: None,
        notes: Vec::new(),
    };

    for (name, g) in [("X", x), ("Y", y)] {
        match vertex_transitivity(g, bound) {
            Verdict::Yes => {}
            Verdict::No if quantum_vertex_transitivity(g, bound) == Verdict::No => {
                return Err(DecompositionError::Hypothesis(format!(
                    "{name} is not vertex transitive"
                )));
            }
            Verdict::No => {
                out.expr = GroupExpr::indeterminate(format!(
                    "{name} is not vertex transitive and its quantum vertex transitivity is undecided"
                ));
                return Ok(out);
            }
            Verdict::Unknown => {
                out.expr = GroupExpr::indeterminate(format!(
                    "vertex transitivity of {name} unknown above the oracle bound"
                ));
                return Ok(out);
            }
        }
    }

    let (xw, yw) = match mode {
        FailureMode::Disconnected => (x.clone(), y.clone()),
        FailureMode::ComplementDisconnected => (x.complement(), y.complement()),
    };
    let flip = |g: Graph| match mode {
        FailureMode::Disconnected => g,
        FailureMode::ComplementDisconnected => g.complement(),
    };

    let tq = twin_quotient(&xw);
    let (Some(xq), Some(alpha)) = (tq.quotient, tq.alpha_or_beta) else {
        return Err(DecompositionError::Hypothesis(
            "twin classes of X are not of uniform size".into(),
        ));
    };
    let x_prime = flip(xq);
    out.alpha = Some(alpha);
    out.x_quotient = Some(x_prime.clone());

    let cd = component_decomposition(&yw, bound);
    let beta = cd.alpha_or_beta.expect("Y side is disconnected");
    out.beta = Some(beta);
    match (cd.pairwise_isomorphic, cd.inner_factor) {
        (Some(true), Some(yq)) => {
            let y_prime = flip(yq);
            out.expr = GroupExpr::free_wreath(
                GroupExpr::free_wreath(GroupExpr::qut(&y_prime), GroupExpr::s_plus(alpha * beta)),
                GroupExpr::qut(&x_prime),
            );
            out.y_factor = Some(y_prime);
        }
        (Some(false), _) => {
            let comps = cd.components.expect("listed");
            let pieces: Vec<Graph> = comps
                .iter()
                .map(|c| lex_product(&Graph::empty(alpha), &yw.induced_subgraph(c)))
                .collect::<Result<_, _>>()?;
            let (union, _) = disjoint_union(&pieces)?;
            out.expr = GroupExpr::free_wreath(GroupExpr::qut(&flip(union)), GroupExpr::qut(&x_prime));
            out.notes
                .push("components of Y are not pairwise isomorphic; union leaf left unexpanded".into());
        }
        _ => {
            out.expr = GroupExpr::indeterminate("component isomorphism unknown above the oracle bound");
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{is_isomorphic, DEFAULT_BOUND as B};

    #[test]
    fn twin_quotient_examples() {
        let r = twin_quotient(&Graph::cycle(4));
        assert_eq!(r.kind, DecompositionKind::TwinQuotient);
        assert_eq!(r.quotient, Some(Graph::complete(2)));
        assert_eq!(r.alpha_or_beta, Some(2));
        assert_eq!(r.reconstruction_verified, Some(true));

        let r = twin_quotient(&Graph::empty(6));
        assert_eq!(r.quotient, Some(Graph::empty(1)));
        assert_eq!(r.alpha_or_beta, Some(6));

        assert_eq!(twin_quotient(&Graph::path(3)).kind, DecompositionKind::None);
        assert_eq!(twin_quotient(&Graph::cycle(5)).kind, DecompositionKind::None);

        let r = twin_quotient(&Graph::complete_multipartite(&[2, 2, 2]));
        assert_eq!(r.quotient, Some(Graph::complete(3)));
        assert_eq!(r.alpha_or_beta, Some(2));
    }

    #[test]
    fn complement_twin_quotient_examples() {
        let r = complement_twin_quotient(&Graph::complete(6));
        assert_eq!(r.kind, DecompositionKind::ComplementTwinQuotient);
        assert_eq!(r.quotient, Some(Graph::empty(1)));
        assert_eq!(r.alpha_or_beta, Some(6));
        assert_eq!(
            complement_twin_quotient(&Graph::cycle(4)).kind,
            DecompositionKind::None
        );
        // The complement of K_{2,2,2} is 3K₂, which is twin-free.
        assert_eq!(
            complement_twin_quotient(&Graph::complete_multipartite(&[2, 2, 2])).kind,
            DecompositionKind::None
        );
        let g = lex_product(&Graph::path(3), &Graph::complete(2)).unwrap();
        let r = complement_twin_quotient(&g);
        assert_eq!(r.quotient, Some(Graph::path(3)));
        assert_eq!(r.alpha_or_beta, Some(2));
        assert_eq!(r.reconstruction_verified, Some(true));
    }

    #[test]
    fn component_examples() {
        let r = component_decomposition(&Graph::cycle(4).complement(), B);
        assert_eq!(r.kind, DecompositionKind::Components);
        assert_eq!(r.alpha_or_beta, Some(2));
        assert_eq!(r.inner_factor, Some(Graph::complete(2)));
        assert_eq!(r.pairwise_isomorphic, Some(true));

        let three_k3 = lex_product(&Graph::empty(3), &Graph::complete(3)).unwrap();
        let r = component_decomposition(&three_k3, B);
        assert_eq!(r.alpha_or_beta, Some(3));
        assert_eq!(r.inner_factor, Some(Graph::complete(3)));
        assert_eq!(r.reconstruction_verified, Some(true));

        let (g, _) = disjoint_union(&[Graph::complete(2), Graph::complete(3)]).unwrap();
        assert_eq!(component_decomposition(&g, B).pairwise_isomorphic, Some(false));

        // Components listed in a scrambled labelling still reconstruct.
        let (g, _) = disjoint_union(&[Graph::path(3), Graph::path(3)]).unwrap();
        let g = g.relabel(&[4, 0, 2, 5, 1, 3]);
        let r = component_decomposition(&g, B);
        assert_eq!(r.reconstruction_verified, Some(true));
        assert!(is_isomorphic(r.inner_factor.as_ref().unwrap(), &Graph::path(3), B).unwrap());
    }

    #[test]
    fn disjoint_union_expressions() {
        let (g, _) = disjoint_union(&[Graph::complete(2), Graph::complete(3)]).unwrap();
        let e = qut_disjoint_union(&g, B).unwrap();
        assert_eq!(e.simplify().to_string(), "FreeProd(S+(2),S+(3))");

        let three_k3 = lex_product(&Graph::empty(3), &Graph::complete(3)).unwrap();
        let e = qut_disjoint_union(&three_k3, B).unwrap();
        assert_eq!(e.simplify().to_string(), "FreeWreath(S+(3),S+(3))");

        let (g, _) = disjoint_union(&[Graph::complete(2), Graph::complete(2), Graph::complete(3)]).unwrap();
        let e = qut_disjoint_union(&g, B).unwrap();
        assert_eq!(
            e.simplify().to_string(),
            "FreeProd(FreeWreath(S+(2),S+(2)),S+(3))"
        );

        assert_eq!(
            qut_disjoint_union(&Graph::cycle(4), B),
            Err(DecompositionError::Connected)
        );
    }

    #[test]
    fn distinguishable_classes_are_determinate() {
        let (g, _) = disjoint_union(&[Graph::cycle(6), Graph::path(6)]).unwrap();
        let e = qut_disjoint_union(&g, B).unwrap();
        assert!(!e.is_indeterminate());
    }

    #[test]
    fn qut_pathways() {
        assert_eq!(qut(&Graph::star(3), B).to_string(), "S+(3)");
        assert_eq!(qut(&Graph::star(4), B).to_string(), "S+(4)");
        assert_eq!(qut(&Graph::cycle(4), B).to_string(), "FreeWreath(S+(2),S+(2))");
        assert_eq!(qut(&Graph::empty(5), B).to_string(), "S+(5)");
        assert!(qut(&Graph::cycle(5), B).is_indeterminate());
        assert!(qut(&Graph::path(4), B).is_indeterminate());
    }

    #[test]
    fn vt_product_examples() {
        let c4 = Graph::cycle(4);
        let d = analyze_vt_product(&c4, &c4.complement(), B).unwrap();
        assert_eq!(d.mode, FailureMode::Disconnected);
        assert_eq!((d.alpha, d.beta), (Some(2), Some(2)));
        assert_eq!(
            d.expr.simplify().to_string(),
            "FreeWreath(FreeWreath(S+(2),S+(4)),S+(2))"
        );

        let e2 = Graph::empty(2);
        let d = analyze_vt_product(&e2, &e2, B).unwrap();
        assert_eq!(d.expr.simplify().to_string(), "S+(4)");

        let k2 = Graph::complete(2);
        let d = analyze_vt_product(&k2, &k2, B).unwrap();
        assert_eq!(d.mode, FailureMode::ComplementDisconnected);
        assert_eq!(d.expr.simplify().to_string(), "S+(4)");

        assert!(matches!(
            analyze_vt_product(&Graph::cycle(5), &Graph::complete(3), B),
            Err(DecompositionError::Hypothesis(_))
        ));
        // P₃ has twins but is not vertex transitive.
        assert!(matches!(
            analyze_vt_product(&Graph::path(3), &e2, B),
            Err(DecompositionError::Hypothesis(_))
        ));
    }
}
