//! Capped symbolic sum-product expansion; the ground-truth oracle.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;

use super::{Circuit, GateKind, Integers, Ring, VarId};
use crate::error::{Error, Result};

pub const DEFAULT_EXPANSION_CAP: usize = 1_000_000;

/// Sparse exponent vector: (variable, exponent >= 1), sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Monomial {
        Monomial(vec![(v, 1)])
    }

    pub fn from_exponents(mut pairs: Vec<(VarId, u32)>) -> Monomial {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut out: Vec<(VarId, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((last, acc)) if *last == v => *acc += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn exponents(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(var, _)| var)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn is_multilinear(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == 1)
    }

    /// Every exponent lies in [1, q-1].
    pub fn is_q_monomial(&self, q: u32) -> bool {
        self.0.iter().all(|&(_, e)| e >= 1 && e < q)
    }

    /// Restriction to the variables accepted by `keep`.
    pub fn restrict(&self, keep: impl Fn(VarId) -> bool) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(v, _)| keep(v)).collect())
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = a[i].1.checked_add(b[j].1).ok_or_else(|| {
                        Error::param(format!("exponent overflow on variable {}", a[i].0))
                    })?;
                    out.push((a[i].0, e));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(Monomial(out))
    }
}

/// A polynomial: monomials over a circuit's variables with ring coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<E> {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, E>,
}

/// Integer sum-product expansion.
pub type MonomialMap = Poly<BigUint>;

impl<E> Poly<E> {
    pub fn terms(&self) -> &BTreeMap<Monomial, E> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Terms keyed by (variable name, exponent) lists.
    pub fn to_named(&self) -> BTreeMap<Vec<(String, u32)>, &E> {
        self.terms
            .iter()
            .map(|(m, c)| {
                let named = m
                    .exponents()
                    .iter()
                    .map(|&(v, e)| (self.vars[v].clone(), e))
                    .collect();
                (named, c)
            })
            .collect()
    }

    pub fn get_named(&self, exps: &[(&str, u32)]) -> Option<&E> {
        let pairs = exps
            .iter()
            .map(|&(name, e)| self.vars.iter().position(|v| v == name).map(|v| (v, e)))
            .collect::<Option<Vec<_>>>()?;
        self.terms.get(&Monomial::from_exponents(pairs))
    }
}

impl fmt::Display for MonomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| (b.0.degree(), b.0).cmp(&(a.0.degree(), a.0)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for &(v, e) in m.exponents() {
                if e == 1 {
                    write!(f, "*{}", self.vars[v])?;
                } else {
                    write!(f, "*{}^{e}", self.vars[v])?;
                }
            }
        }
        Ok(())
    }
}

/// How a terminal is treated during [`expand_over`].
#[derive(Clone, Debug)]
pub enum Leaf<E> {
    Symbolic,
    Const(E),
}

/// Exact integer expansion of the circuit's polynomial.
pub fn expand(circuit: &Circuit, cap: usize) -> Result<MonomialMap> {
    expand_over(circuit, &Integers, |_| Leaf::Symbolic, cap)
}

/// Expansion with coefficients in `ring`: symbolic terminals stay as
/// variables, constant terminals are folded into coefficients.
pub fn expand_over<R: Ring>(
    circuit: &Circuit,
    ring: &R,
    leaf: impl Fn(VarId) -> Leaf<R::Elem>,
    cap: usize,
) -> Result<Poly<R::Elem>> {
    if cap == 0 {
        return Err(Error::param("expansion cap must be positive"));
    }
    let mut values: Vec<BTreeMap<Monomial, R::Elem>> = Vec::with_capacity(circuit.len());
    for g in circuit.gates() {
        let poly = match g.kind {
            GateKind::Var(v) => match leaf(v) {
                Leaf::Symbolic => BTreeMap::from([(Monomial::var(v), ring.one())]),
                Leaf::Const(c) if ring.is_zero(&c) => BTreeMap::new(),
                Leaf::Const(c) => BTreeMap::from([(Monomial::one(), c)]),
            },
            GateKind::Add => {
                let mut acc = values[g.inputs[0]].clone();
                for &c in &g.inputs[1..] {
                    for (m, coef) in &values[c] {
                        accumulate(ring, &mut acc, m.clone(), coef);
                    }
                }
                acc
            }
            GateKind::Mul => {
                let (a, b) = (&values[g.inputs[0]], &values[g.inputs[1]]);
                let mut acc = BTreeMap::new();
                for (ma, ca) in a {
                    for (mb, cb) in b {
                        let coef = ring.mul(ca, cb);
                        accumulate(ring, &mut acc, ma.checked_mul(mb)?, &coef);
                        if acc.len() > cap {
                            return Err(Error::ExpansionTooLarge { cap });
                        }
                    }
                }
                acc
            }
        };
        if poly.len() > cap {
            return Err(Error::ExpansionTooLarge { cap });
        }
        values.push(poly);
    }
    Ok(Poly {
        vars: circuit.vars().to_vec(),
        terms: values.pop().unwrap_or_default(),
    })
}

fn accumulate<R: Ring>(ring: &R, acc: &mut BTreeMap<Monomial, R::Elem>, m: Monomial, c: &R::Elem) {
    use std::collections::btree_map::Entry;
    match acc.entry(m) {
        Entry::Vacant(slot) => {
            if !ring.is_zero(c) {
                slot.insert(c.clone());
            }
        }
        Entry::Occupied(mut slot) => {
            ring.add_assign(slot.get_mut(), c);
            if ring.is_zero(slot.get()) {
                slot.remove();
            }
        }
    }
}

/// True iff some monomial with nonzero coefficient is a q-monomial of total
/// degree at most `k`.
pub fn q_monomial_oracle<E>(poly: &Poly<E>, q: u32, k: u64) -> bool {
    poly.terms
        .keys()
        .any(|m| m.is_q_monomial(q) && m.degree() <= k && m.degree() > 0)
}
