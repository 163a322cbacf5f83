//! Weisfeiler–Leman pair refinement, lexicographic graph products and the
//! symmetry analysis of `X[Y]`.
//!
//! The classical side is computed exactly by a backtracking automorphism
//! oracle for small graphs. Quantum automorphism groups are only ever
//! produced as symbolic [`GroupExpr`] trees, and only along pathways whose
//! answer is certified by the combinatorial criteria; everything else is
//! reported as indeterminate.

pub mod analysis;
pub mod decompose;
pub mod enumerate;
pub mod error;
pub mod expr;
pub mod graph;
pub mod group;
pub mod io;
pub mod par;
pub mod sweep;
pub mod wl;

pub use num_bigint;

pub use analysis::{
    analyze_product, check_first_iteration_consequences, sabidussi_conditions, verify_wl_separation,
    AnalysisReport, ConditionReport, ProductVerdict, SeparationReport,
};
pub use decompose::{
    analyze_vt_product, complement_twin_quotient, component_decomposition, qut, qut_disjoint_union,
    twin_quotient, DecompositionKind, DecompositionReport,
};
pub use error::{DecompositionError, Error, GraphError, OracleError, ParseError, WlError};
pub use expr::GroupExpr;
pub use graph::{classify_pair, disjoint_union, lex_product, Graph, PairClass, ProductVertex, TwinPartition};
pub use group::{automorphisms, is_isomorphic, wreath_order, PermGroup, Permutation, Verdict};
pub use par::Exec;
pub use wl::{stable_colouring, stable_partition, PairColouring, RefinementTrace};
