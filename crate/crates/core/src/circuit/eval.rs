use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{Circuit, GateKind, VarId};
use crate::algebra::{alg_mul, AlgElem, Field};
use crate::error::{Error, Result};

/// A commutative ring given by its operations.
pub trait Ring {
    type Elem: Clone;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }
}

/// The non-negative integers (all circuit coefficients are path counts).
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a + b
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a * b
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn add_assign(&self, a: &mut BigUint, b: &BigUint) {
        *a += b;
    }
}

/// Integers modulo a prime below 2^32.
#[derive(Clone, Copy, Debug)]
pub struct ModP(pub u64);

impl Ring for ModP {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

/// GF(2^d)[Z_2^k] as a ring.
#[derive(Clone, Copy, Debug)]
pub struct GroupAlgebra<'f> {
    pub field: &'f Field,
    pub k: u32,
}

impl Ring for GroupAlgebra<'_> {
    type Elem = AlgElem;

    fn zero(&self) -> AlgElem {
        AlgElem::zero(self.k)
    }
    fn one(&self) -> AlgElem {
        AlgElem::identity(self.k)
    }
    fn add(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        let mut out = a.clone();
        self.add_assign(&mut out, b);
        out
    }
    fn mul(&self, a: &AlgElem, b: &AlgElem) -> AlgElem {
        alg_mul(self.field, a, b).expect("operands share the ring's dimension")
    }
    fn is_zero(&self, a: &AlgElem) -> bool {
        a.is_zero()
    }
    fn add_assign(&self, a: &mut AlgElem, b: &AlgElem) {
        a.add_assign(b).expect("operands share the ring's dimension");
    }
}

impl Circuit {
    /// Evaluates with one value per [`VarId`].
    pub fn evaluate_indexed<R: Ring>(&self, ring: &R, assignment: &[R::Elem]) -> R::Elem {
        assert_eq!(assignment.len(), self.vars.len(), "one value per variable");
        self.evaluate_with(ring, |v| assignment[v].clone())
    }

    /// Evaluates in one topological pass. `bind` is called once per terminal
    /// gate, so several terminals of one variable must receive equal values.
    /// A gate's value is released after its last consumer has read it.
    pub fn evaluate_with<R: Ring>(&self, ring: &R, mut bind: impl FnMut(VarId) -> R::Elem) -> R::Elem {
        let mut remaining = self.fan_out.clone();
        let mut values: Vec<Option<R::Elem>> = vec![None; self.gates.len()];
        for (id, g) in self.gates.iter().enumerate() {
            let v = match g.kind {
                GateKind::Var(var) => bind(var),
                GateKind::Add => {
                    let mut acc = take_input(&mut values, &mut remaining, g.inputs[0]);
                    for &c in &g.inputs[1..] {
                        let x = take_input(&mut values, &mut remaining, c);
                        ring.add_assign(&mut acc, &x);
                    }
                    acc
                }
                GateKind::Mul => {
                    let a = take_input(&mut values, &mut remaining, g.inputs[0]);
                    let b = take_input(&mut values, &mut remaining, g.inputs[1]);
                    ring.mul(&a, &b)
                }
            };
            values[id] = Some(v);
        }
        values[self.root()].take().expect("root evaluated")
    }

    /// Evaluates with values looked up by variable name.
    pub fn evaluate<R: Ring>(&self, ring: &R, assignment: &HashMap<String, R::Elem>) -> Result<R::Elem> {
        let values = self
            .vars
            .iter()
            .map(|name| {
                assignment
                    .get(name)
                    .cloned()
                    .ok_or_else(|| Error::MissingBinding(name.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.evaluate_indexed(ring, &values))
    }
}

fn take_input<T: Clone>(values: &mut [Option<T>], remaining: &mut [usize], id: usize) -> T {
    remaining[id] -= 1;
    if remaining[id] == 0 {
        values[id].take().expect("input evaluated before parent")
    } else {
        values[id].clone().expect("input evaluated before parent")
    }
}
