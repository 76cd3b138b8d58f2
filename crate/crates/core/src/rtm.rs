//! Randomized testing for q-monomials of degree at most k.
//!
//! After [`transform_full`], every y_ij is replaced by `v_ij + v_0` for a
//! uniform nonzero `v_ij` in Z_2^k and every z by a uniform scalar of
//! GF(2^d). The circuit is evaluated over GF(2^d)[Z_2^k]; a nonzero value
//! proves that a q-monomial of degree <= k exists. A zero value is wrong
//! with probability at most 7/8 per trial.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgElem, Field, FieldElem, GroupVec, MAX_DIM};
use crate::circuit::{Circuit, CircuitStats, GroupAlgebra};
use crate::error::{Error, Result};
use crate::report::{flags_string, Answer, Mode, Phases, TestReport};
use crate::transform::{transform_full, TransformOutput, VarRole};

pub const DEFAULT_TRIALS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestParams {
    pub q: u32,
    pub k: u32,
    pub trials: usize,
    pub seed: u64,
}

impl TestParams {
    pub fn new(q: u32, k: u32) -> TestParams {
        TestParams {
            q,
            k,
            trials: DEFAULT_TRIALS,
            seed: 0,
        }
    }

    pub fn trials(self, trials: usize) -> TestParams {
        TestParams { trials, ..self }
    }

    pub fn seed(self, seed: u64) -> TestParams {
        TestParams { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.q < 2 {
            return Err(Error::param(format!("q must be at least 2, got {}", self.q)));
        }
        if self.k == 0 {
            return Err(Error::param("k must be at least 1"));
        }
        if self.k > MAX_DIM {
            return Err(Error::Budget(format!(
                "k = {} exceeds the group algebra cap of {MAX_DIM}",
                self.k
            )));
        }
        if self.trials == 0 {
            return Err(Error::param("trials must be at least 1"));
        }
        Ok(())
    }
}

/// d = ceil(log2(k(s+1)+1)) + 1, clamped to [2, 32]; then
/// |GF(2^d)| >= 2(k(s+1)+1).
pub fn choose_field_degree(k: u32, s: usize) -> Result<u32> {
    if k == 0 || s == 0 {
        return Err(Error::param("field degree needs k >= 1 and s >= 1"));
    }
    let x = (k as u128) * (s as u128 + 1) + 1;
    let ceil_log2 = 128 - (x - 1).leading_zeros();
    Ok((ceil_log2 + 1).clamp(2, 32))
}

/// Per-trial seed derived from the master seed and the trial index, so the
/// outcome of trial `i` does not depend on scheduling.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(1)))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// One evaluation of C'' at a random group-algebra point; true iff nonzero.
pub fn rtm_trial(t: &TransformOutput, field: &Field, k: u32, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut y_vecs = vec![GroupVec::ZERO; t.vars.y_count() + 1];
    for (i, j) in t.vars.y_vars() {
        y_vecs[t.vars.gamma(i, j)] = GroupVec(rng.random_range(1..(1u32 << k)));
    }
    let order = field.order();
    let z_vals: Vec<FieldElem> = (0..t.vars.z_count())
        .map(|_| FieldElem(rng.random_range(0..order) as u32))
        .collect();
    let ring = GroupAlgebra { field, k };
    let value = t.circuit.evaluate_with(&ring, |v| match t.vars.role(v) {
        VarRole::Y(i, j) => AlgElem::shifted_basis(k, y_vecs[t.vars.gamma(i, j)]),
        VarRole::Z(z) => AlgElem::scalar(k, z_vals[z]),
        VarRole::X(_) => panic!("rtm_trial expects a C'' circuit"),
    });
    !value.is_zero()
}

/// A circuit transformed and paired with its field, ready for trials.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub transformed: TransformOutput,
    pub field: Field,
    pub k: u32,
    pub stats: CircuitStats,
}

impl Prepared {
    pub fn new(c: &Circuit, params: &TestParams) -> Result<Prepared> {
        params.validate()?;
        let stats = c.stats();
        let transformed = transform_full(c, params.q)?;
        let field = Field::new(choose_field_degree(params.k, stats.s)?)?;
        Ok(Prepared {
            transformed,
            field,
            k: params.k,
            stats,
        })
    }

    pub fn trial(&self, seed: u64) -> bool {
        rtm_trial(&self.transformed, &self.field, self.k, seed)
    }

    /// Flags for trials `0..count`, evaluated on the current rayon pool.
    pub fn run_trials(&self, master_seed: u64, count: usize) -> Vec<bool> {
        (0..count as u64)
            .into_par_iter()
            .map(|i| self.trial(trial_seed(master_seed, i)))
            .collect()
    }
}

pub fn rtm_test(c: &Circuit, params: &TestParams) -> Result<TestReport> {
    let mut phases = Phases::start();
    let prepared = Prepared::new(c, params)?;
    phases.lap("transform");
    let flags = prepared.run_trials(params.seed, params.trials);
    phases.lap("evaluate");
    let successes = flags.iter().filter(|&&f| f).count();
    Ok(TestReport {
        answer: Answer::from_bool(successes > 0),
        mode: Mode::Randomized,
        q: params.q,
        k: params.k,
        d: Some(prepared.field.degree()),
        s: prepared.stats.s,
        t: prepared.stats.t,
        tree_like: prepared.stats.tree_like,
        trials_run: flags.len(),
        successes,
        seed: Some(params.seed),
        trial_flags: flags_string(&flags),
        elapsed_ms: Some(phases.finish()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::tests::example1;
    use crate::circuit::CircuitBuilder;

    fn product(names: &[&str]) -> Circuit {
        let mut b = CircuitBuilder::new();
        let gates: Vec<_> = names.iter().map(|n| b.var(n)).collect();
        let root = b.product(&gates);
        b.finish(root).unwrap()
    }

    #[test]
    fn field_degree_examples() {
        assert_eq!(choose_field_degree(3, 10).unwrap(), 7);
        assert_eq!(choose_field_degree(1, 1).unwrap(), 3);
        assert!(choose_field_degree(1, 0).is_err());
        assert_eq!(choose_field_degree(16, usize::MAX / 2).unwrap(), 32);
        for (k, s) in [(1u32, 1usize), (3, 10), (5, 100), (16, 5000)] {
            let d = choose_field_degree(k, s).unwrap();
            assert!(1u128 << d >= 2 * (k as u128 * (s as u128 + 1) + 1));
        }
    }

    #[test]
    fn params_validation() {
        assert!(TestParams::new(1, 3).validate().is_err());
        assert!(TestParams::new(2, 0).validate().is_err());
        assert!(matches!(TestParams::new(2, 17).validate(), Err(Error::Budget(_))));
        assert!(TestParams::new(2, 3).trials(0).validate().is_err());
        assert!(rtm_test(&example1(), &TestParams::new(2, 17)).is_err());
    }

    #[test]
    fn example1_without_multilinear_monomials_never_fires() {
        let p = Prepared::new(&example1(), &TestParams::new(2, 5)).unwrap();
        assert!((0..200).all(|s| !p.trial(trial_seed(9, s))));
    }

    #[test]
    fn square_never_fires() {
        let p = Prepared::new(&product(&["x1", "x1"]), &TestParams::new(2, 2)).unwrap();
        assert!((0..200).all(|s| !p.trial(s)));
    }

    #[test]
    fn product_of_two_fires_often() {
        let p = Prepared::new(&product(&["x1", "x2"]), &TestParams::new(2, 2)).unwrap();
        let hits = p.run_trials(1, 1000).iter().filter(|&&f| f).count();
        assert!(hits as f64 / 1000.0 >= 0.28 * 0.5, "rate {hits}/1000");
    }

    #[test]
    fn degree_above_k_never_fires() {
        let p = Prepared::new(&product(&["x1", "x2", "x3"]), &TestParams::new(2, 2)).unwrap();
        assert!((0..200).all(|s| !p.trial(s)));
    }

    #[test]
    fn example1_reports() {
        let c = example1();
        let yes = rtm_test(&c, &TestParams::new(3, 3).seed(7)).unwrap();
        assert_eq!(yes.answer, Answer::Yes);
        assert_eq!(yes.d, Some(choose_field_degree(3, 12).unwrap()));
        assert_eq!((yes.s, yes.t, yes.tree_like), (12, 7, false));
        assert_eq!(rtm_test(&c, &TestParams::new(2, 5)).unwrap().answer, Answer::No);
        assert_eq!(rtm_test(&c, &TestParams::new(6, 5)).unwrap().answer, Answer::Yes);
    }

    #[test]
    fn reports_are_reproducible() {
        let params = TestParams::new(3, 3).seed(42).trials(32);
        let a = rtm_test(&example1(), &params).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| rtm_test(&example1(), &params).unwrap());
        assert_eq!(a.without_timings(), b.without_timings());
        assert_eq!(a.trial_flags.len(), 32);
    }
}
