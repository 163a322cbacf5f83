use lexsym_core::analysis::sabidussi_conditions;
use lexsym_core::decompose::{
    analyze_vt_product, complement_twin_quotient, component_decomposition, qut, DecompositionKind,
};
use lexsym_core::enumerate::{unlabelled_graphs, unlabelled_graphs_up_to};
use lexsym_core::graph::{lex_product, Graph};
use lexsym_core::group::{automorphisms, is_isomorphic, is_vertex_transitive, DEFAULT_BOUND as B};
use lexsym_core::twin_quotient;
use num_bigint::BigUint;

fn corpus() -> Vec<Graph> {
    let mut gs = unlabelled_graphs_up_to(7).unwrap();
    let small = unlabelled_graphs_up_to(3).unwrap();
    for x in small.iter().filter(|g| g.n() >= 2) {
        for y in small.iter().filter(|g| g.n() >= 2) {
            if x.n() * y.n() <= 10 {
                gs.push(lex_product(x, y).unwrap());
            }
        }
    }
    gs
}

#[test]
fn twin_quotients_reconstruct_and_are_maximal() {
    for g in corpus() {
        let r = twin_quotient(&g);
        if r.kind == DecompositionKind::None {
            let tp = g.twin_partition();
            assert!(tp.uniform_size.is_none_or(|a| a == 1));
            continue;
        }
        let q = r.quotient.unwrap();
        let alpha = r.alpha_or_beta.unwrap();
        assert_eq!(r.reconstruction_verified, Some(true));
        let rebuilt = lex_product(&q, &Graph::empty(alpha)).unwrap();
        assert!(is_isomorphic(&rebuilt, &g, B).unwrap());
        assert!(!q.has_twins(), "quotient keeps twins for {g:?}");
    }
}

#[test]
fn complement_quotients_reconstruct() {
    for g in corpus() {
        let r = complement_twin_quotient(&g);
        if r.kind == DecompositionKind::None {
            continue;
        }
        let rebuilt = lex_product(
            r.quotient.as_ref().unwrap(),
            &Graph::complete(r.alpha_or_beta.unwrap()),
        )
        .unwrap();
        assert!(is_isomorphic(&rebuilt, &g, B).unwrap());
        assert!(!r.quotient.unwrap().complement().has_twins());
    }
}

#[test]
fn component_decompositions_reconstruct() {
    for g in corpus() {
        let r = component_decomposition(&g, B);
        if r.kind == DecompositionKind::None {
            assert!(g.is_connected());
            continue;
        }
        let comps = r.components.unwrap();
        let same = comps
            .iter()
            .all(|c| is_isomorphic(&g.induced_subgraph(c), &g.induced_subgraph(&comps[0]), B).unwrap());
        assert_eq!(r.pairwise_isomorphic, Some(same));
        if same {
            let y = r.inner_factor.unwrap();
            assert!(y.is_connected());
            let rebuilt = lex_product(&Graph::empty(r.alpha_or_beta.unwrap()), &y).unwrap();
            assert!(is_isomorphic(&rebuilt, &g, B).unwrap());
        }
    }
}

/// Read classically, the decomposition predicts `|Aut(X[Y])|`.
#[test]
fn vertex_transitive_decompositions_match_classical_orders() {
    let vt: Vec<Graph> = unlabelled_graphs_up_to(6)
        .unwrap()
        .into_iter()
        .filter(|g| is_vertex_transitive(g, B).unwrap())
        .collect();
    let mut checked = 0;
    for x in &vt {
        for y in &vt {
            if x.n() * y.n() > 12 || sabidussi_conditions(x, y).wreath_holds {
                continue;
            }
            let d = analyze_vt_product(x, y, B).unwrap();
            let z = lex_product(x, y).unwrap();
            let actual = automorphisms(&z, B).unwrap().order();
            let mut leaf = |g: &Graph| automorphisms(g, B).ok().map(|a| a.order());
            let predicted = d
                .expr
                .classical_order(&mut leaf)
                .expect("all leaves within bound");
            assert_eq!(predicted, BigUint::from(actual), "X = {x:?}, Y = {y:?}");
            assert_eq!(d.expr.degree(), Some(z.n()));
            checked += 1;
        }
    }
    assert!(checked > 20, "only {checked} pairs");
}

#[test]
fn simplify_is_idempotent() {
    for g in unlabelled_graphs(6).unwrap() {
        let e = qut(&g, B);
        assert_eq!(e.simplify(), e);
    }
}

#[test]
fn certified_expressions_predict_classical_orders() {
    // Each certified pathway is also a classical identity.
    for g in unlabelled_graphs_up_to(7).unwrap() {
        let Ok(raw) = lexsym_core::decompose::certified_qut(&g, B) else {
            continue;
        };
        let mut leaf = |h: &Graph| automorphisms(h, B).ok().map(|a| a.order());
        if let Some(predicted) = raw.classical_order(&mut leaf) {
            assert_eq!(
                predicted,
                BigUint::from(automorphisms(&g, B).unwrap().order()),
                "{g:?}: {raw}"
            );
        }
    }
}
