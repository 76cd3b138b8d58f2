//! The group algebra GF(2^d)[Z_2^k].
//!
//! An element is a dense array of 2^k field coefficients; index `g` holds the
//! coefficient of the group vector whose bit mask is `g`. The group product of
//! two vectors is the XOR of their masks, so algebra multiplication is an XOR
//! convolution.

use std::fmt;

use super::field::{Field, FieldElem};
use crate::error::{Error, Result};

pub const MAX_DIM: u32 = 16;

/// A vector of Z_2^k as a k-bit mask. Mask 0 is the group identity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct GroupVec(pub u32);

impl GroupVec {
    pub const ZERO: GroupVec = GroupVec(0);

    /// Standard basis vector e_i, 0-based.
    pub fn unit(i: u32) -> GroupVec {
        GroupVec(1 << i)
    }
}

impl std::ops::Mul for GroupVec {
    type Output = GroupVec;
    fn mul(self, rhs: GroupVec) -> GroupVec {
        GroupVec(self.0 ^ rhs.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgElem {
    k: u32,
    coeffs: Vec<FieldElem>,
}

impl AlgElem {
    pub fn zero(k: u32) -> AlgElem {
        assert!(k <= MAX_DIM, "group dimension {k} exceeds {MAX_DIM}");
        AlgElem {
            k,
            coeffs: vec![FieldElem::ZERO; 1 << k],
        }
    }

    pub fn identity(k: u32) -> AlgElem {
        Self::scalar(k, FieldElem::ONE)
    }

    /// The field element `c` placed on the identity vector.
    pub fn scalar(k: u32, c: FieldElem) -> AlgElem {
        let mut e = Self::zero(k);
        e.coeffs[0] = c;
        e
    }

    pub fn basis(k: u32, v: GroupVec) -> AlgElem {
        let mut e = Self::zero(k);
        e.coeffs[v.0 as usize] = FieldElem::ONE;
        e
    }

    /// `basis(v) + identity`, the substitution used for y-variables.
    pub fn shifted_basis(k: u32, v: GroupVec) -> AlgElem {
        let mut e = Self::basis(k, v);
        e.coeffs[0] += FieldElem::ONE;
        e
    }

    pub fn from_coeffs(k: u32, coeffs: Vec<FieldElem>) -> Result<AlgElem> {
        if k > MAX_DIM {
            return Err(Error::param(format!("group dimension {k} exceeds {MAX_DIM}")));
        }
        if coeffs.len() != 1 << k {
            return Err(Error::param(format!(
                "expected {} coefficients, got {}",
                1usize << k,
                coeffs.len()
            )));
        }
        Ok(AlgElem { k, coeffs })
    }

    pub fn dim(&self) -> u32 {
        self.k
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, v: GroupVec) -> FieldElem {
        self.coeffs[v.0 as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn support(&self) -> impl Iterator<Item = GroupVec> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(g, _)| GroupVec(g as u32))
    }

    /// Multiplies every coefficient by a field scalar.
    pub fn scale(&self, field: &Field, c: FieldElem) -> AlgElem {
        AlgElem {
            k: self.k,
            coeffs: self.coeffs.iter().map(|&a| field.mul(a, c)).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &AlgElem) -> Result<()> {
        check_dims(self, other)?;
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(())
    }
}

impl fmt::Debug for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgElem(k={}; {})", self.k, self)
    }
}

/// `index:coeff-hex` pairs in ascending index order, zeros omitted.
impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        write!(f, "[")?;
        for (g, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{g}:{c}")?;
            first = false;
        }
        write!(f, "]")
    }
}

fn check_dims(u: &AlgElem, w: &AlgElem) -> Result<()> {
    if u.k != w.k {
        return Err(Error::DimensionMismatch {
            left: u.k,
            right: w.k,
        });
    }
    Ok(())
}

pub fn alg_add(u: &AlgElem, w: &AlgElem) -> Result<AlgElem> {
    let mut out = u.clone();
    out.add_assign(w)?;
    Ok(out)
}

/// XOR-convolution product. When either side has at most two nonzero
/// coefficients only those are visited.
pub fn alg_mul(field: &Field, u: &AlgElem, w: &AlgElem) -> Result<AlgElem> {
    check_dims(u, w)?;
    let (sparse, dense) = if u.nnz() <= w.nnz() { (u, w) } else { (w, u) };
    if sparse.nnz() <= 2 {
        Ok(mul_sparse(field, sparse, dense))
    } else {
        Ok(mul_dense(field, u, w))
    }
}

fn mul_sparse(field: &Field, sparse: &AlgElem, dense: &AlgElem) -> AlgElem {
    let mut out = AlgElem::zero(dense.k);
    for (a, &ca) in sparse.coeffs.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        if ca == FieldElem::ONE {
            for (b, &cb) in dense.coeffs.iter().enumerate() {
                out.coeffs[a ^ b] += cb;
            }
        } else {
            for (b, &cb) in dense.coeffs.iter().enumerate() {
                out.coeffs[a ^ b] += field.mul(ca, cb);
            }
        }
    }
    out
}

/// Baseline O(4^k) convolution; zero coefficients of the left operand are skipped.
pub fn mul_dense(field: &Field, u: &AlgElem, w: &AlgElem) -> AlgElem {
    let mut out = AlgElem::zero(u.k);
    let nonzero_w: Vec<(usize, FieldElem)> = w
        .coeffs
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect();
    for (a, &ca) in u.coeffs.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for &(b, cb) in &nonzero_w {
            out.coeffs[a ^ b] += field.mul(ca, cb);
        }
    }
    out
}

/// Product of `(basis(v) + identity)` over `vs`, by repeated multiplication.
pub fn alg_span_product(field: &Field, k: u32, vs: &[GroupVec]) -> Result<AlgElem> {
    let mut acc = AlgElem::identity(k);
    for &v in vs {
        check_vec(k, v)?;
        acc = alg_mul(field, &acc, &AlgElem::shifted_basis(k, v))?;
    }
    Ok(acc)
}

/// Closed form of [`alg_span_product`]: zero when `vs` is linearly dependent
/// over GF(2), otherwise the all-ones indicator of the span of `vs`.
pub fn span_product_closed_form(k: u32, vs: &[GroupVec]) -> Result<AlgElem> {
    for &v in vs {
        check_vec(k, v)?;
    }
    if gf2_rank(vs) < vs.len() {
        return Ok(AlgElem::zero(k));
    }
    let mut out = AlgElem::zero(k);
    for subset in 0u64..(1u64 << vs.len()) {
        let g = vs
            .iter()
            .enumerate()
            .filter(|(i, _)| (subset >> i) & 1 == 1)
            .fold(0u32, |acc, (_, v)| acc ^ v.0);
        out.coeffs[g as usize] = FieldElem::ONE;
    }
    Ok(out)
}

fn check_vec(k: u32, v: GroupVec) -> Result<()> {
    if (v.0 as u64) >> k != 0 {
        return Err(Error::param(format!("vector {:#x} outside Z_2^{k}", v.0)));
    }
    Ok(())
}

/// Rank over GF(2) of a list of bit vectors.
pub fn gf2_rank(vs: &[GroupVec]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for v in vs {
        let mut x = v.0;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_conv(field: &Field, u: &AlgElem, w: &AlgElem) -> AlgElem {
        let n = 1usize << u.k;
        let mut out = vec![FieldElem::ZERO; n];
        for a in 0..n {
            for b in 0..n {
                out[a ^ b] += field.mul(u.coeffs[a], w.coeffs[b]);
            }
        }
        AlgElem::from_coeffs(u.k, out).unwrap()
    }

    fn arb_elem(k: u32, d: u32, sparsity: u32) -> impl Strategy<Value = AlgElem> {
        prop::collection::vec((0u32..(1 << d), 0u32..sparsity), 1usize << k).prop_map(
            move |cs| {
                let coeffs = cs
                    .into_iter()
                    .map(|(c, keep)| if keep == 0 { FieldElem(c) } else { FieldElem::ZERO })
                    .collect();
                AlgElem::from_coeffs(k, coeffs).unwrap()
            },
        )
    }

    #[test]
    fn add_examples() {
        let f = Field::new(5).unwrap();
        let u = alg_mul(
            &f,
            &AlgElem::shifted_basis(3, GroupVec(5)),
            &AlgElem::scalar(3, FieldElem(7)),
        )
        .unwrap();
        assert_eq!(alg_add(&u, &AlgElem::zero(3)).unwrap(), u);
        assert!(alg_add(&u, &u).unwrap().is_zero());
        let both = alg_add(&AlgElem::basis(1, GroupVec(0)), &AlgElem::basis(1, GroupVec(1))).unwrap();
        assert_eq!(both.coeffs(), &[FieldElem::ONE, FieldElem::ONE]);
    }

    #[test]
    fn dimension_mismatch() {
        let f = Field::new(2).unwrap();
        let err = alg_mul(&f, &AlgElem::zero(2), &AlgElem::zero(3)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 2, right: 3 });
        assert!(alg_add(&AlgElem::zero(1), &AlgElem::zero(2)).is_err());
    }

    #[test]
    fn basis_products_follow_xor() {
        let f = Field::new(4).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                let p = alg_mul(&f, &AlgElem::basis(3, GroupVec(a)), &AlgElem::basis(3, GroupVec(b))).unwrap();
                assert_eq!(p, AlgElem::basis(3, GroupVec(a ^ b)));
            }
        }
    }

    #[test]
    fn shifted_basis_squares_to_zero() {
        let f = Field::new(3).unwrap();
        for k in 1..=8 {
            for v in 0..(1u32 << k) {
                let e = AlgElem::shifted_basis(k, GroupVec(v));
                assert!(alg_mul(&f, &e, &e).unwrap().is_zero(), "k={k} v={v}");
            }
        }
    }

    #[test]
    fn span_product_examples() {
        let f = Field::new(3).unwrap();
        let full = alg_span_product(&f, 2, &[GroupVec(0b01), GroupVec(0b10)]).unwrap();
        // (e10 + e00)(e01 + e00) = e11 + e10 + e01 + e00
        assert_eq!(full.coeffs(), &[FieldElem::ONE; 4]);
        assert!(alg_span_product(&f, 2, &[GroupVec(1), GroupVec(1)]).unwrap().is_zero());
        assert!(alg_span_product(&f, 2, &[GroupVec(1), GroupVec(2), GroupVec(3)])
            .unwrap()
            .is_zero());
        assert!(alg_span_product(&f, 2, &[GroupVec(4)]).is_err());
    }

    #[test]
    fn display_format() {
        let e = AlgElem::from_coeffs(2, vec![FieldElem(1), FieldElem(0), FieldElem(0xa), FieldElem(0)]).unwrap();
        assert_eq!(e.to_string(), "[0:1 2:a]");
        assert_eq!(AlgElem::zero(2).to_string(), "[]");
    }

    proptest! {
        #[test]
        fn mul_matches_naive((u, w, x) in (1u32..=6).prop_flat_map(|k| (arb_elem(k, 6, 1), arb_elem(k, 6, 3), arb_elem(k, 6, 1)))) {
            let f = Field::new(6).unwrap();
            let k = u.dim();
            let uw = alg_mul(&f, &u, &w).unwrap();
            prop_assert_eq!(&uw, &naive_conv(&f, &u, &w));
            prop_assert_eq!(&uw, &alg_mul(&f, &w, &u).unwrap());
            // associativity and distributivity
            prop_assert_eq!(
                alg_mul(&f, &uw, &x).unwrap(),
                alg_mul(&f, &u, &alg_mul(&f, &w, &x).unwrap()).unwrap()
            );
            prop_assert_eq!(
                alg_mul(&f, &u, &alg_add(&w, &x).unwrap()).unwrap(),
                alg_add(&uw, &alg_mul(&f, &u, &x).unwrap()).unwrap()
            );
            prop_assert_eq!(alg_mul(&f, &u, &AlgElem::identity(k)).unwrap(), u);
        }

        #[test]
        fn sparse_path_matches_baseline(k in 1u32..=7, a in 0u32..128, b in 0u32..128, c in 1u32..64, dense in arb_elem(7, 6, 1)) {
            let f = Field::new(6).unwrap();
            let mask = (1u32 << k) - 1;
            let dense = AlgElem::from_coeffs(k, dense.coeffs()[..1 << k].to_vec()).unwrap();
            let mut sparse = AlgElem::zero(k);
            sparse.coeffs[(a & mask) as usize] = FieldElem(c);
            sparse.coeffs[(b & mask) as usize] += FieldElem(1);
            prop_assert_eq!(mul_sparse(&f, &sparse, &dense), mul_dense(&f, &sparse, &dense));
            prop_assert_eq!(alg_mul(&f, &dense, &sparse).unwrap(), naive_conv(&f, &sparse, &dense));
        }

        #[test]
        fn span_product_routes_agree(k in 1u32..=8, raw in prop::collection::vec(any::<u32>(), 0..=8)) {
            let f = Field::new(4).unwrap();
            let vs: Vec<GroupVec> = raw.iter().take(k as usize).map(|v| GroupVec(v & ((1 << k) - 1))).collect();
            let direct = alg_span_product(&f, k, &vs).unwrap();
            prop_assert_eq!(&direct, &span_product_closed_form(k, &vs).unwrap());
            prop_assert_eq!(direct.is_zero(), gf2_rank(&vs) < vs.len());
        }
    }
}
