//! Binary extension fields GF(2^d) for 1 <= d <= 32.
//!
//! Elements are bit masks of polynomials over GF(2) of degree < d. Addition
//! is XOR. Multiplication is a carry-less product reduced by a fixed
//! irreducible modulus; fields with d <= 16 additionally carry log/antilog
//! tables so that the hot evaluation loops only do table lookups.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 32;

/// Largest degree for which log/antilog tables are built.
const TABLE_MAX_DEGREE: u32 = 16;

/// Smallest irreducible polynomial of each degree, indexed by `d - 1`.
///
/// Degree 1 uses `x + 1` rather than `x`; both yield GF(2).
pub(crate) const MODULI: [u64; 32] = [
    0x3,
    0x7,
    0xb,
    0x13,
    0x25,
    0x43,
    0x83,
    0x11b,
    0x203,
    0x409,
    0x805,
    0x1009,
    0x201b,
    0x4021,
    0x8003,
    0x1002b,
    0x20009,
    0x40009,
    0x80027,
    0x100009,
    0x200005,
    0x400003,
    0x800021,
    0x100001b,
    0x2000009,
    0x400001b,
    0x8000027,
    0x10000003,
    0x20000005,
    0x40000003,
    0x80000009,
    0x10000008d,
];

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::Add for FieldElem {
    type Output = FieldElem;
    #[inline]
    fn add(self, rhs: FieldElem) -> FieldElem {
        FieldElem(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for FieldElem {
    #[inline]
    fn add_assign(&mut self, rhs: FieldElem) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

#[derive(Clone)]
struct LogTables {
    log: Vec<u32>,
    // Doubled so that log(a) + log(b) never needs a reduction.
    exp: Vec<u32>,
}

/// The field context: degree, reduction polynomial and lookup tables.
#[derive(Clone)]
pub struct Field {
    degree: u32,
    modulus: u64,
    tables: Option<LogTables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("degree", &self.degree)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl Field {
    /// Builds GF(2^d) with the tabulated modulus, re-checking irreducibility.
    pub fn new(degree: u32) -> Result<Field> {
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(Error::param(format!(
                "field degree {degree} outside 1..={MAX_DEGREE}"
            )));
        }
        let modulus = MODULI[degree as usize - 1];
        debug_assert!(is_irreducible(modulus));
        let mut field = Field {
            degree,
            modulus,
            tables: None,
        };
        if degree <= TABLE_MAX_DEGREE {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of elements, 2^d.
    pub fn order(&self) -> u64 {
        1u64 << self.degree
    }

    #[inline]
    pub fn contains(&self, a: FieldElem) -> bool {
        (a.0 as u64) < self.order()
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        match &self.tables {
            Some(t) => FieldElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => self.mul_clmul(a, b),
        }
    }

    /// Table-free product: carry-less multiply then reduce.
    pub fn mul_clmul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let prod = clmul(a.0 as u64, b.0 as u64);
        FieldElem(poly_mod(prod, self.modulus) as u32)
    }

    pub fn pow(&self, mut base: FieldElem, mut exp: u64) -> FieldElem {
        let mut acc = FieldElem::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse as a^(2^d - 2).
    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero {
                degree: self.degree,
            });
        }
        Ok(self.pow(a, self.order() - 2))
    }

    fn build_tables(&self) -> LogTables {
        let size = self.order() as usize;
        let group = size - 1;
        let generator = self.find_generator();
        let mut log = vec![0u32; size];
        let mut exp = vec![0u32; 2 * group.max(1)];
        let mut x = FieldElem::ONE;
        for i in 0..group {
            exp[i] = x.0;
            log[x.0 as usize] = i as u32;
            x = self.mul_clmul(x, generator);
        }
        for i in group..exp.len() {
            exp[i] = exp[i - group];
        }
        LogTables { log, exp }
    }

    fn find_generator(&self) -> FieldElem {
        let group = self.order() - 1;
        if group == 1 {
            return FieldElem::ONE;
        }
        let primes = prime_factors(group);
        (2..self.order() as u32)
            .map(FieldElem)
            .find(|&g| {
                primes
                    .iter()
                    .all(|&p| self.pow_clmul(g, group / p) != FieldElem::ONE)
            })
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn pow_clmul(&self, mut base: FieldElem, mut exp: u64) -> FieldElem {
        let mut acc = FieldElem::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_clmul(acc, base);
            }
            base = self.mul_clmul(base, base);
            exp >>= 1;
        }
        acc
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[inline]
pub(crate) fn clmul(a: u64, b: u64) -> u64 {
    let mut acc = 0u64;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        // Operands are < 2^32 so the product fits in 64 bits.
        acc ^= (a << shift) & 0u64.wrapping_sub(b & 1);
        b >>= 1;
        shift += 1;
    }
    acc
}

#[inline]
fn poly_degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

pub(crate) fn poly_mod(mut a: u64, m: u64) -> u64 {
    let dm = poly_degree(m);
    while a != 0 {
        let da = poly_degree(a);
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

/// Trial division by every polynomial of degree 1..=deg/2.
pub fn is_irreducible(p: u64) -> bool {
    let d = poly_degree(p);
    if d < 1 {
        return false;
    }
    let half = d / 2;
    (2u64..(1u64 << (half + 1))).all(|q| poly_mod(p, q) != 0)
}
