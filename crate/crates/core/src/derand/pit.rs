//! Deterministic identity testing for read-once branching programs over
//! GF(2^d)[Z_2^k], with a symbolic-expansion reference.

use std::collections::BTreeSet;

use super::abp::{Abp, AbpLeaf};
use crate::algebra::{AlgElem, Field, FieldElem};
use crate::circuit::{expand_over, Circuit, GroupAlgebra, Leaf, VarId};
use crate::error::Result;

/// Row-echelon basis of a subspace of GF(2^d)^dim. Each row is normalized
/// to 1 at its pivot and is zero at the pivots of all earlier rows.
struct Echelon<'f> {
    field: &'f Field,
    rows: Vec<(usize, Vec<FieldElem>)>,
}

impl<'f> Echelon<'f> {
    fn new(field: &'f Field) -> Echelon<'f> {
        Echelon {
            field,
            rows: Vec::new(),
        }
    }

    /// Adds `v` if it is independent of the current rows.
    fn insert(&mut self, mut v: Vec<FieldElem>) {
        for (pivot, row) in &self.rows {
            let f = v[*pivot];
            if f.is_zero() {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x += self.field.mul(f, r);
                }
            }
        }
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return;
        };
        let inv = self.field.inv(v[pivot]).expect("pivot is nonzero");
        if inv != FieldElem::ONE {
            for x in v.iter_mut() {
                *x = self.field.mul(*x, inv);
            }
        }
        self.rows.push((pivot, v));
    }

    fn into_rows(self) -> Vec<Vec<FieldElem>> {
        self.rows.into_iter().map(|(_, r)| r).collect()
    }
}

/// `out += p * c` in the group algebra, on raw coefficient slices.
fn mul_acc(field: &Field, out: &mut [FieldElem], p: &[FieldElem], c: &AlgElem) {
    for (b, &cb) in c.coeffs().iter().enumerate() {
        if cb.is_zero() {
            continue;
        }
        for (a, &pa) in p.iter().enumerate() {
            if pa.is_zero() {
                continue;
            }
            let term = if cb == FieldElem::ONE { pa } else { field.mul(pa, cb) };
            out[a ^ b] += term;
        }
    }
}

/// True iff the branching program computes the zero polynomial.
///
/// Sweeps the layers from the source, keeping a basis of the span of
/// coefficient profiles: for each word of letters read so far (each letter
/// being the constant part or one z of the layer), the vector of its
/// coefficients at the current layer's nodes, each a group-algebra element
/// flattened to 2^k field entries. The profiles of longer words are linear
/// images of shorter ones, so a spanning set suffices; the polynomial is zero
/// iff the span at the sink is trivial. Each z labels a single edge and thus
/// one layer, so words and commutative monomials correspond one to one.
pub fn rs_pit(abp: &Abp, field: &Field) -> bool {
    let size = 1usize << abp.dim();
    let layers = abp.layers();
    let mut slot = vec![0usize; abp.node_count()];
    for nodes in &layers {
        for (i, &v) in nodes.iter().enumerate() {
            slot[v] = i;
        }
    }
    let mut by_layer: Vec<Vec<usize>> = vec![Vec::new(); abp.depth()];
    for (i, e) in abp.edges().iter().enumerate() {
        by_layer[abp.layer(e.from)].push(i);
    }

    let mut start = vec![FieldElem::ZERO; size];
    start[slot[abp.source()] * size] = FieldElem::ONE;
    let mut basis = vec![start];
    for (l, edge_ids) in by_layer.iter().enumerate() {
        let width = layers[l + 1].len();
        let letters: BTreeSet<usize> = edge_ids
            .iter()
            .flat_map(|&i| abp.edges()[i].label.terms.iter().map(|t| t.0))
            .collect();
        let mut next = Echelon::new(field);
        for p in &basis {
            // The constant letter, then each z of this layer.
            let mut images = vec![vec![FieldElem::ZERO; width * size]];
            images.extend(letters.iter().map(|_| vec![FieldElem::ZERO; width * size]));
            for &i in edge_ids {
                let e = &abp.edges()[i];
                let src = &p[slot[e.from] * size..(slot[e.from] + 1) * size];
                if src.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let dst = slot[e.to] * size..(slot[e.to] + 1) * size;
                mul_acc(field, &mut images[0][dst.clone()], src, &e.label.constant);
                for (z, coef) in &e.label.terms {
                    let idx = 1 + letters.range(..z).count();
                    mul_acc(field, &mut images[idx][dst.clone()], src, coef);
                }
            }
            for img in images {
                next.insert(img);
            }
        }
        basis = next.into_rows();
        if basis.is_empty() {
            return true;
        }
    }
    basis.is_empty()
}

/// Reference zero test: expands the circuit's polynomial in the z's with
/// group-algebra coefficients and reports whether every coefficient is zero.
pub fn symbolic_zero_oracle(
    c: &Circuit,
    field: &Field,
    k: u32,
    leaf: impl Fn(VarId) -> AbpLeaf,
    cap: usize,
) -> Result<bool> {
    let ring = GroupAlgebra { field, k };
    let poly = expand_over(
        c,
        &ring,
        |v| match leaf(v) {
            AbpLeaf::Z(_) => Leaf::Symbolic,
            AbpLeaf::Const(a) => Leaf::Const(a),
        },
        cap,
    )?;
    Ok(poly.is_empty())
}
