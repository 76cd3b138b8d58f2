//! Application front-ends: each problem is encoded as a polynomial whose
//! q-monomials of the right degree are exactly the problem's solutions,
//! together with exhaustive combinatorial oracles.
//!
//! - non-simple k-path: walks on k vertices, each vertex used at most q-1
//!   times; degree k.
//! - generalized m-set k-packing: k members (repetition allowed) covering
//!   each item at most q-1 times; degree m·k.
//! - generalized P2-packing: set packing over the vertex sets of 2-edge
//!   paths; degree 3k.

mod graph;
mod sets;

pub use graph::{build_kpath_circuit, kpath_oracle, vertex_var, Graph, ORACLE_STEP_BUDGET};
pub use sets::{
    build_setpack_circuit, p2_paths, p2_to_sets, p2pack_oracle, setpack_oracle, P2Sets, SetSystem,
};
