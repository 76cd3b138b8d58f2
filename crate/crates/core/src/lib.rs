//! Detection of q-monomials in polynomials given by arithmetic circuits.
//!
//! The randomized tester substitutes group-algebra elements of
//! GF(2^d)[Z_2^k] into a transformed circuit; non-q-monomials and monomials
//! of degree above k are annihilated, q-monomials survive with good
//! probability. The deterministic tester replaces the random choices by a
//! perfect hash family and a noncommutative identity test on an algebraic
//! branching program.

pub mod algebra;
pub mod apps;
pub mod circuit;
pub mod corpus;
pub mod derand;
pub mod error;
pub mod report;
pub mod rtm;
pub mod transform;

pub use error::{Error, Result};
pub use report::{oracle_test, zero_polynomial_report, Answer, Mode, TestReport};
pub use rtm::{rtm_test, TestParams};
pub use derand::dtm_test;
