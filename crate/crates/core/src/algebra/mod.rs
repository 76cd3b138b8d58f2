//! Exact arithmetic in GF(2^d) and in the group algebra GF(2^d)[Z_2^k].

mod field;
mod group;

pub use field::{is_irreducible, Field, FieldElem, MAX_DEGREE};
pub use group::{
    alg_add, alg_mul, alg_span_product, gf2_rank, mul_dense, span_product_closed_form, AlgElem,
    GroupVec, MAX_DIM,
};
