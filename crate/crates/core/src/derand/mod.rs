//! Deterministic testing for tree-like circuits.
//!
//! The random vectors of the randomized tester are replaced by standard
//! basis vectors chosen through a perfect hash family over the y-variables,
//! and the random z-values by a deterministic identity test on a branching
//! program that reads each z once.

mod abp;
mod phf;
mod pit;

use rayon::prelude::*;

pub use abp::{circuit_to_abp, Abp, AbpEdge, AbpLeaf, Label};
pub use phf::{
    binomial, build_phf, phf_size_target, verify_phf, PerfectHashFamily, PHF_SUBSET_BUDGET,
};
pub use pit::{rs_pit, symbolic_zero_oracle};

use crate::algebra::{AlgElem, Field, GroupVec, MAX_DIM};
use crate::circuit::{Circuit, VarId};
use crate::error::{Error, Result};
use crate::report::{flags_string, Answer, Mode, Phases, TestReport};
use crate::rtm::choose_field_degree;
use crate::transform::{transform_full, TransformOutput, VarRole};

/// Colorings are examined in chunks of this size; the search stops after
/// the first chunk containing a nonzero polynomial, so the number of
/// colorings examined does not depend on the thread count.
pub const DTM_CHUNK: usize = 32;

/// Leaf assignment for one coloring: y_ij becomes e_c + e_0 with c the
/// color of γ(i, j); z's stay symbolic.
pub fn coloring_leaves<'a>(
    t: &'a TransformOutput,
    k: u32,
    coloring: &'a [u32],
) -> impl Fn(VarId) -> AbpLeaf + 'a {
    move |v| match t.vars.role(v) {
        VarRole::Y(i, j) => {
            let color = coloring[t.vars.gamma(i, j) - 1];
            AbpLeaf::Const(AlgElem::shifted_basis(k, GroupVec::unit(color - 1)))
        }
        VarRole::Z(z) => AbpLeaf::Z(z),
        VarRole::X(_) => panic!("deterministic testing expects a C'' circuit"),
    }
}

/// A transformed tree-like circuit with its hash family, ready to test.
#[derive(Clone, Debug)]
pub struct DtmPlan {
    pub transformed: TransformOutput,
    pub family: PerfectHashFamily,
    pub field: Field,
    pub k: u32,
}

impl DtmPlan {
    pub fn new(c: &Circuit, q: u32, k: u32) -> Result<DtmPlan> {
        if q < 2 {
            return Err(Error::param(format!("q must be at least 2, got {q}")));
        }
        if k == 0 {
            return Err(Error::param("k must be at least 1"));
        }
        if k > MAX_DIM {
            return Err(Error::Budget(format!(
                "k = {k} exceeds the group algebra cap of {MAX_DIM}"
            )));
        }
        c.require_tree_like()?;
        let transformed = transform_full(c, q)?;
        let universe = transformed.vars.y_count();
        // Fewer than k items: an injective coloring with N colors suffices.
        let family = build_phf(universe, (k as usize).min(universe))?;
        let field = Field::new(choose_field_degree(k, c.len())?)?;
        Ok(DtmPlan {
            transformed,
            family,
            field,
            k,
        })
    }

    /// True iff the polynomial under coloring `index` is nonzero.
    pub fn coloring_is_nonzero(&self, index: usize) -> Result<bool> {
        let leaf = coloring_leaves(&self.transformed, self.k, &self.family.colorings()[index]);
        let abp = circuit_to_abp(&self.transformed.circuit, self.k, leaf)?;
        Ok(!rs_pit(&abp, &self.field))
    }

    /// Flags for the colorings examined, in family order.
    pub fn run(&self) -> Result<Vec<bool>> {
        let mut flags = Vec::new();
        for chunk_start in (0..self.family.len()).step_by(DTM_CHUNK) {
            let end = (chunk_start + DTM_CHUNK).min(self.family.len());
            let chunk = (chunk_start..end)
                .into_par_iter()
                .map(|i| self.coloring_is_nonzero(i))
                .collect::<Result<Vec<bool>>>()?;
            let found = chunk.iter().any(|&f| f);
            flags.extend(chunk);
            if found {
                break;
            }
        }
        Ok(flags)
    }
}

/// Deterministic test for a q-monomial of degree at most k in a tree-like
/// circuit. `trials_run` counts the colorings examined.
pub fn dtm_test(c: &Circuit, q: u32, k: u32) -> Result<TestReport> {
    let mut phases = Phases::start();
    let stats = c.stats();
    let plan = DtmPlan::new(c, q, k)?;
    phases.lap("prepare");
    let flags = plan.run()?;
    phases.lap("identity_test");
    let successes = flags.iter().filter(|&&f| f).count();
    Ok(TestReport {
        answer: Answer::from_bool(successes > 0),
        mode: Mode::Deterministic,
        q,
        k,
        d: Some(plan.field.degree()),
        s: stats.s,
        t: stats.t,
        tree_like: stats.tree_like,
        trials_run: flags.len(),
        successes,
        seed: None,
        trial_flags: flags_string(&flags),
        elapsed_ms: Some(phases.finish()),
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::circuit::tests::example1;
    use crate::circuit::{expand, q_monomial_oracle, CircuitBuilder, DEFAULT_EXPANSION_CAP};
    use crate::corpus::{exhaustive_trees, random_tree};

    /// Tree-like circuit for u·(16·x1·u + 2·x2) with u = x1² + x2, every
    /// shared gate duplicated.
    pub(crate) fn example1_tree() -> Circuit {
        let mut b = CircuitBuilder::new();
        let x1 = b.var("x1");
        let x2 = b.var("x2");
        let m1 = b.mul(x1, x1);
        let u1 = b.add(vec![m1, x2]);
        let m2 = b.mul(x1, x1);
        let u2 = b.add(vec![m2, x2]);
        let s16 = b.add(vec![x1; 16]);
        let e = b.mul(s16, u2);
        let f = b.add(vec![x2, x2]);
        let g = b.add(vec![e, f]);
        let root = b.mul(u1, g);
        b.finish(root).unwrap()
    }

    #[test]
    fn tree_encoding_matches_example1() {
        let tree = example1_tree();
        assert!(tree.is_tree_like());
        assert_eq!(
            expand(&tree, DEFAULT_EXPANSION_CAP).unwrap(),
            expand(&example1(), DEFAULT_EXPANSION_CAP).unwrap()
        );
    }

    #[test]
    fn example1_answers() {
        let tree = example1_tree();
        assert_eq!(dtm_test(&tree, 3, 3).unwrap().answer, Answer::Yes);
        assert_eq!(dtm_test(&tree, 2, 3).unwrap().answer, Answer::No);
        assert_eq!(dtm_test(&tree, 6, 5).unwrap().answer, Answer::Yes);
        assert_eq!(dtm_test(&tree, 2, 5).unwrap().answer, Answer::No);
    }

    #[test]
    fn product_of_two_variables() {
        let mut b = CircuitBuilder::new();
        let x1 = b.var("x1");
        let x2 = b.var("x2");
        let m = b.mul(x1, x2);
        let c = b.finish(m).unwrap();
        let r = dtm_test(&c, 2, 2).unwrap();
        assert_eq!(r.answer, Answer::Yes);
        assert_eq!(r.mode, Mode::Deterministic);
        assert_eq!(dtm_test(&c, 2, 1).unwrap().answer, Answer::No);
    }

    #[test]
    fn rejects_dags_and_bad_parameters() {
        assert!(matches!(dtm_test(&example1(), 3, 3), Err(Error::NotTreeLike { .. })));
        let tree = example1_tree();
        assert!(dtm_test(&tree, 1, 3).is_err());
        assert!(dtm_test(&tree, 3, 0).is_err());
        assert!(matches!(dtm_test(&tree, 3, 17), Err(Error::Budget(_))));
    }

    #[test]
    fn deterministic_across_pools() {
        let tree = example1_tree();
        let a = dtm_test(&tree, 3, 3).unwrap().without_timings();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| dtm_test(&tree, 3, 3).unwrap().without_timings());
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn agrees_with_oracle_on_small_trees() {
        let family = exhaustive_trees(4, 2);
        for c in &family {
            let poly = expand(c, DEFAULT_EXPANSION_CAP).unwrap();
            for q in 2..=3 {
                for k in 1..=3u32 {
                    let expected = q_monomial_oracle(&poly, q, k as u64);
                    let got = dtm_test(c, q, k).unwrap().answer.is_yes();
                    assert_eq!(got, expected, "q={q} k={k} circuit:\n{}", c.to_json());
                }
            }
        }
    }

    #[test]
    fn pit_matches_symbolic_expansion_on_random_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for round in 0..40 {
            let c = random_tree(&mut rng, 3, 4);
            let q = 2 + round % 2;
            let k = 2;
            let plan = DtmPlan::new(&c, q, k).unwrap();
            for coloring in plan.family.colorings() {
                let leaf = coloring_leaves(&plan.transformed, k, coloring);
                let abp = circuit_to_abp(&plan.transformed.circuit, k, &leaf).unwrap();
                let symbolic =
                    symbolic_zero_oracle(&plan.transformed.circuit, &plan.field, k, &leaf, DEFAULT_EXPANSION_CAP)
                        .unwrap();
                assert_eq!(rs_pit(&abp, &plan.field), symbolic);
            }
        }
    }
}
