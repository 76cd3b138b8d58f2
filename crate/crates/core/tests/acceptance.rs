//! Acceptance suite: one test per criterion, each printing a single
//! `[PASS]`/`[FAIL]` line with its measurements before asserting.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use monomial_core::algebra::{
    alg_add, alg_mul, alg_span_product, AlgElem, Field, FieldElem, GroupVec,
};
use monomial_core::apps::{
    build_kpath_circuit, build_setpack_circuit, kpath_oracle, p2_to_sets, p2pack_oracle,
    setpack_oracle, Graph, SetSystem,
};
use monomial_core::circuit::{expand, q_monomial_oracle, Circuit, DEFAULT_EXPANSION_CAP};
use monomial_core::corpus::{exhaustive_trees, random_dag, random_tree};
use monomial_core::derand::{
    build_phf, circuit_to_abp, coloring_leaves, phf_size_target, rs_pit, symbolic_zero_oracle,
    verify_phf, AbpLeaf, DtmPlan,
};
use monomial_core::rtm::{Prepared, TestParams};
use monomial_core::transform::{transform_full, VarRole};
use monomial_core::{dtm_test, rtm_test, Answer, TestReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Prints the verdict line outside the test harness's capture, then asserts.
fn verdict(id: u32, name: &str, pass: bool, detail: String) {
    let line = format!(
        "[{}] criterion {id}: {name} -- {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).expect("stdout");
    out.flush().expect("stdout");
    assert!(pass, "criterion {id} failed: {detail}");
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn load(name: &str) -> Circuit {
    Circuit::from_json(&std::fs::read_to_string(data(name)).expect("data file")).expect("valid circuit")
}

fn secs(d: Duration) -> String {
    format!("{:.3} s", d.as_secs_f64())
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_1_example_fidelity() {
    let start = Instant::now();
    let c = load("example1.circ");
    let poly = expand(&c, DEFAULT_EXPANSION_CAP).unwrap();
    let elapsed = start.elapsed();
    let got: BTreeMap<Vec<(String, u32)>, u64> = poly
        .to_named()
        .into_iter()
        .map(|(m, coef)| (m, coef.try_into().unwrap()))
        .collect();
    let term = |parts: &[(&str, u32)], coef: u64| {
        (parts.iter().map(|&(v, e)| (v.to_string(), e)).collect::<Vec<_>>(), coef)
    };
    let expected: BTreeMap<_, _> = [
        term(&[("x1", 5)], 16),
        term(&[("x1", 3), ("x2", 1)], 32),
        term(&[("x1", 2), ("x2", 1)], 2),
        term(&[("x1", 1), ("x2", 2)], 16),
        term(&[("x2", 2)], 2),
    ]
    .into_iter()
    .collect();
    let pass = got == expected && elapsed < Duration::from_secs(1);
    verdict(
        1,
        "sample circuit expansion",
        pass,
        format!("expansion `{poly}` in {}", secs(elapsed)),
    );
}

// ---------------------------------------------------------------------------

/// Independent GF(2)[x] product reduced modulo `modulus` (bitwise long division).
fn slow_field_mul(a: u64, b: u64, modulus: u64, d: u32) -> u64 {
    let mut prod = 0u64;
    for i in 0..d {
        if b >> i & 1 == 1 {
            prod ^= a << i;
        }
    }
    for bit in (d..2 * d).rev() {
        if prod >> bit & 1 == 1 {
            prod ^= modulus << (bit - d);
        }
    }
    prod
}

/// Span of `vs` by closure under XOR, as a sorted set of indices.
fn span(vs: &[GroupVec]) -> BTreeSet<u32> {
    let mut out = BTreeSet::from([0u32]);
    for v in vs {
        let shifted: Vec<u32> = out.iter().map(|x| x ^ v.0).collect();
        out.extend(shifted);
    }
    out
}

#[test]
fn criterion_2_algebra_identities() {
    let start = Instant::now();
    let mut failures = Vec::new();

    // Field axioms, exhaustively for d <= 4.
    for d in 1..=4u32 {
        let f = Field::new(d).unwrap();
        let elems: Vec<FieldElem> = (0..f.order() as u32).map(FieldElem).collect();
        for &a in &elems {
            if !a.is_zero() && f.mul(a, f.inv(a).unwrap()) != FieldElem::ONE {
                failures.push(format!("d={d}: inverse of {a}"));
            }
            for &b in &elems {
                let ab = f.mul(a, b);
                if ab != f.mul(b, a)
                    || ab.0 as u64 != slow_field_mul(a.0 as u64, b.0 as u64, f.modulus(), d)
                {
                    failures.push(format!("d={d}: product {a}*{b}"));
                }
                for &c in &elems {
                    if f.mul(ab, c) != f.mul(a, f.mul(b, c))
                        || f.mul(a, b + c) != f.mul(a, b) + f.mul(a, c)
                    {
                        failures.push(format!("d={d}: triple {a},{b},{c}"));
                    }
                }
            }
        }
    }

    // (basis(v) + identity)^2 = 0 for every v.
    let field = Field::new(8).unwrap();
    let mut squares = 0;
    for k in 1..=8u32 {
        for v in 0..1u32 << k {
            let x = alg_add(&AlgElem::basis(k, GroupVec(v)), &AlgElem::identity(k)).unwrap();
            squares += 1;
            if !alg_mul(&field, &x, &x).unwrap().is_zero() {
                failures.push(format!("k={k}: square of v={v} is nonzero"));
            }
        }
    }

    // Span products on 500 random vector sets per k.
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut dependent, mut independent) = (0, 0);
    for k in 1..=8u32 {
        for _ in 0..500 {
            let size = rng.random_range(1..=k as usize + 1);
            let vs: Vec<GroupVec> = (0..size).map(|_| GroupVec(rng.random_range(0..1u32 << k))).collect();
            let product = alg_span_product(&field, k, &vs).unwrap();
            let spanned = span(&vs);
            let full_rank = spanned.len() == 1usize << vs.len();
            let ok = if full_rank {
                independent += 1;
                (0..1u32 << k).all(|idx| {
                    let expected = if spanned.contains(&idx) { FieldElem::ONE } else { FieldElem::ZERO };
                    product.coeff(GroupVec(idx)) == expected
                })
            } else {
                dependent += 1;
                product.is_zero()
            };
            if !ok {
                failures.push(format!("k={k}: span product of {vs:?}"));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(30);
    verdict(
        2,
        "algebra identity suite",
        pass,
        format!(
            "field axioms d<=4, {squares} squares, 4000 span products ({independent} independent, {dependent} dependent), {} failures, {}",
            failures.len(),
            secs(elapsed)
        ),
    );
}

// ---------------------------------------------------------------------------

/// (circuit, q, k) triples with a known oracle answer.
fn oracle_corpus(want_yes: bool, count: usize, seed: u64) -> Vec<(String, Circuit, u32, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempt = 0;
    while out.len() < count {
        attempt += 1;
        let n = rng.random_range(1..=6);
        let internal = rng.random_range(1..=7);
        let (kind, c) = if attempt % 2 == 0 {
            ("dag", random_dag(&mut rng, n, internal))
        } else {
            ("tree", random_tree(&mut rng, n, internal))
        };
        let Ok(poly) = expand(&c, 20_000) else { continue };
        let q = rng.random_range(2..=4);
        let k = rng.random_range(1..=6u32);
        if q_monomial_oracle(&poly, q, k as u64) == want_yes {
            out.push((format!("random {kind} #{attempt}"), c, q, k));
        }
    }
    out
}

#[test]
fn criterion_3_rtm_soundness() {
    let start = Instant::now();
    let mut corpus = oracle_corpus(false, 100, 31);
    let e1 = load("example1.circ");
    let e1_tree = load("example1_tree.circ");
    for k in 1..=6 {
        corpus.push((format!("sample circuit, q=2 k={k}"), e1.clone(), 2, k));
        corpus.push((format!("sample circuit tree form, q=2 k={k}"), e1_tree.clone(), 2, k));
    }
    corpus.push(("sample circuit, q=3 k=1".into(), e1.clone(), 3, 1));
    corpus.push(("sample circuit, q=5 k=1".into(), e1.clone(), 5, 1));
    // Every entry must really be a no-instance.
    for (name, c, q, k) in &corpus {
        let poly = expand(c, DEFAULT_EXPANSION_CAP).unwrap();
        assert!(!q_monomial_oracle(&poly, *q, *k as u64), "{name} is not a no-instance");
    }
    let mut violations = Vec::new();
    for (name, c, q, k) in &corpus {
        let prepared = Prepared::new(c, &TestParams::new(*q, *k)).unwrap();
        let yes = prepared.run_trials(0x5eed, 200).iter().filter(|&&f| f).count();
        if yes > 0 {
            violations.push(format!("{name}: {yes} yes-trials"));
        }
    }
    verdict(
        3,
        "RTM soundness",
        violations.is_empty(),
        format!(
            "{} no-circuits x 200 trials, {} violations {:?}, {}",
            corpus.len(),
            violations.len(),
            violations,
            secs(start.elapsed())
        ),
    );
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_4_rtm_completeness_rate() {
    let start = Instant::now();
    let mut corpus = oracle_corpus(true, 24, 47);
    let e1 = load("example1.circ");
    corpus.push(("sample circuit, q=3 k=3".into(), e1.clone(), 3, 3));
    corpus.push(("sample circuit, q=6 k=5".into(), e1, 6, 5));
    corpus.push(("sample circuit tree form, q=3 k=3".into(), load("example1_tree.circ"), 3, 3));
    for (name, g, k, q) in [
        ("kpath K3", Graph::complete(3), 3usize, 2u32),
        ("kpath K4", Graph::complete(4), 4, 2),
        ("kpath edge", Graph::path(2), 3, 3),
        ("kpath P4", Graph::path(4), 4, 2),
    ] {
        let c = build_kpath_circuit(&g, k).unwrap().unwrap();
        corpus.push((format!("{name}, q={q} k={k}"), c, q, k as u32));
    }
    let pair = SetSystem::parse("1 2 3\n3 4 5\n", 3, true).unwrap();
    corpus.push(("setpack pair, q=3 k=2".into(), build_setpack_circuit(&pair, 2).unwrap().unwrap(), 3, 6));
    for (name, c, q, k) in &corpus {
        let poly = expand(c, DEFAULT_EXPANSION_CAP).unwrap();
        assert!(q_monomial_oracle(&poly, *q, *k as u64), "{name} is not a yes-instance");
    }
    let trials = 1000;
    let mut total = 0usize;
    let mut min_rate = (f64::INFINITY, String::new());
    for (name, c, q, k) in &corpus {
        let prepared = Prepared::new(c, &TestParams::new(*q, *k)).unwrap();
        let hits = prepared.run_trials(0xc0de, trials).iter().filter(|&&f| f).count();
        total += hits;
        let rate = hits as f64 / trials as f64;
        if rate < min_rate.0 {
            min_rate = (rate, name.clone());
        }
    }
    let aggregate = total as f64 / (corpus.len() * trials) as f64;
    let elapsed = start.elapsed();
    let pass = corpus.len() >= 20 && aggregate >= 0.125 && elapsed < Duration::from_secs(300);
    verdict(
        4,
        "RTM completeness rate",
        pass,
        format!(
            "{} yes-circuits x {trials} trials, aggregate rate {aggregate:.4} (bound 0.125), lowest {:.3} on {}, {}",
            corpus.len(),
            min_rate.0,
            min_rate.1,
            secs(elapsed)
        ),
    );
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_5_dtm_exactness() {
    let start = Instant::now();
    let mut checked = 0;
    let mut disagreements = Vec::new();
    let mut check = |label: String, c: &Circuit, q: u32, k: u32| {
        let poly = expand(c, DEFAULT_EXPANSION_CAP).unwrap();
        let expected = q_monomial_oracle(&poly, q, k as u64);
        let got = dtm_test(c, q, k).unwrap().answer.is_yes();
        checked += 1;
        if got != expected {
            disagreements.push(format!("{label} q={q} k={k}: dtm {got}, oracle {expected}"));
        }
    };
    let family = exhaustive_trees(5, 3);
    for (i, c) in family.iter().enumerate() {
        for q in 2..=4 {
            for k in 1..=4 {
                check(format!("exhaustive #{i}"), c, q, k);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for i in 0..200 {
        let n = rng.random_range(1..=4);
        let internal = rng.random_range(1..=6);
        let c = random_tree(&mut rng, n, internal);
        let q = rng.random_range(2..=4);
        let k = rng.random_range(1..=4);
        check(format!("random #{i}"), &c, q, k);
    }
    let elapsed = start.elapsed();
    let pass = disagreements.is_empty() && elapsed < Duration::from_secs(600);
    verdict(
        5,
        "DTM exactness",
        pass,
        format!(
            "{} exhaustive trees x q in 2..=4 x k in 1..=4 plus 200 random trees: {checked} cases, {} disagreements {:?}, {}",
            family.len(),
            disagreements.len(),
            disagreements.iter().take(5).collect::<Vec<_>>(),
            secs(elapsed)
        ),
    );
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_6_phf_correctness() {
    let start = Instant::now();
    let mut invalid = Vec::new();
    let mut over_target = Vec::new();
    let mut worst = (0.0f64, 0usize, 0usize);
    let mut cases = 0;
    for n in 1..=14 {
        for k in 1..=n.min(4) {
            let f = build_phf(n, k).unwrap();
            cases += 1;
            if !verify_phf(&f) {
                invalid.push((n, k));
            }
            let target = phf_size_target(n, k);
            let ratio = f.len() as f64 / target;
            if ratio > worst.0 {
                worst = (ratio, n, k);
            }
            if f.len() as f64 > target {
                over_target.push((n, k, f.len()));
            }
        }
    }
    verdict(
        6,
        "PHF correctness",
        invalid.is_empty(),
        format!(
            "{cases} (N,k) pairs, {} invalid; size metric: {} above e^k*k*ln N + k {:?}, largest size/target {:.3} at N={} k={}, {}",
            invalid.len(),
            over_target.len(),
            over_target,
            worst.0,
            worst.1,
            worst.2,
            secs(start.elapsed())
        ),
    );
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_7_pit_oracle_equivalence() {
    let start = Instant::now();
    let mut instances = 0;
    let mut zeros = 0;
    let mut disagreements = Vec::new();
    let mut compare = |label: String, c: &Circuit, field: &Field, k: u32, leaf: &dyn Fn(usize) -> AbpLeaf| {
        let abp = circuit_to_abp(c, k, leaf).unwrap();
        let fast = rs_pit(&abp, field);
        let reference = symbolic_zero_oracle(c, field, k, leaf, DEFAULT_EXPANSION_CAP).unwrap();
        instances += 1;
        if reference {
            zeros += 1;
        }
        if fast != reference {
            disagreements.push(label);
        }
    };

    // Exhaustive small trees, every coloring of their hash family.
    for (i, c) in exhaustive_trees(4, 2).iter().enumerate() {
        for q in 2..=3 {
            for k in 1..=3 {
                let plan = DtmPlan::new(c, q, k).unwrap();
                for (j, coloring) in plan.family.colorings().iter().enumerate() {
                    let leaf = coloring_leaves(&plan.transformed, k, coloring);
                    compare(format!("tree #{i} q={q} k={k} coloring {j}"), &plan.transformed.circuit, &plan.field, k, &leaf);
                }
            }
        }
    }

    // Random trees with random vectors (repeats allowed) and random scalars
    // multiplied into the constants.
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..200 {
        let n = rng.random_range(1..=3);
        let internal = rng.random_range(1..=4);
        let c = random_tree(&mut rng, n, internal);
        let q = rng.random_range(2..=3);
        let k = rng.random_range(1..=3);
        let t = transform_full(&c, q).unwrap();
        let field = Field::new(4).unwrap();
        let mut consts = BTreeMap::new();
        for (a, b) in t.vars.y_vars() {
            let v = GroupVec(rng.random_range(0..1u32 << k));
            let scalar = FieldElem(rng.random_range(1..field.order() as u32));
            consts.insert((a, b), AlgElem::shifted_basis(k, v).scale(&field, scalar));
        }
        let leaf = |v: usize| match t.vars.role(v) {
            VarRole::Y(a, b) => AbpLeaf::Const(consts[&(a, b)].clone()),
            VarRole::Z(z) => AbpLeaf::Z(z),
            VarRole::X(_) => unreachable!("transformed circuit"),
        };
        compare(format!("random #{i}"), &t.circuit, &field, k, &leaf);
    }
    let pass = disagreements.is_empty() && instances >= 400 && zeros > 0;
    verdict(
        7,
        "rs_pit oracle equivalence",
        pass,
        format!(
            "{instances} instances ({zeros} identically zero, {} nonzero), {} disagreements {:?}, {}",
            instances - zeros,
            disagreements.len(),
            disagreements.iter().take(5).collect::<Vec<_>>(),
            secs(start.elapsed())
        ),
    );
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_8_applications() {
    let start = Instant::now();
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    let mut record = |label: String, expected: bool, got: bool| {
        if expected != got {
            mismatches.push(label.clone());
        }
        rows.push(label);
    };
    let randomized = |c: &Circuit, q: u32, k: u32| -> bool {
        rtm_test(c, &TestParams::new(q, k).trials(64).seed(2026)).unwrap().answer.is_yes()
    };

    let k3 = Graph::complete(3);
    let edge = Graph::path(2);
    let path3 = Graph::path(3);
    for (name, g, q, k, expected) in [
        ("kpath K3", &k3, 2u32, 3usize, true),
        ("kpath edge", &edge, 2, 3, false),
        ("kpath edge", &edge, 3, 3, true),
    ] {
        let oracle = kpath_oracle(g, k, q).unwrap();
        record(format!("{name} q={q} k={k} oracle"), expected, oracle);
        let c = build_kpath_circuit(g, k).unwrap().unwrap();
        record(format!("{name} q={q} k={k} randomized"), oracle, randomized(&c, q, k as u32));
    }

    let pair = SetSystem::parse(&std::fs::read_to_string(data("pair.sets")).unwrap(), 3, true).unwrap();
    for (q, expected) in [(2u32, false), (3, true)] {
        let oracle = setpack_oracle(&pair, 2, q).unwrap();
        record(format!("setpack pair q={q} k=2 oracle"), expected, oracle);
        let c = build_setpack_circuit(&pair, 2).unwrap().unwrap();
        record(format!("setpack pair q={q} k=2 randomized"), oracle, randomized(&c, q, 6));
        record(format!("setpack pair q={q} k=2 deterministic"), oracle, dtm_test(&c, q, 6).unwrap().answer.is_yes());
    }

    for (name, g) in [("p2pack K3", &k3), ("p2pack path3", &path3)] {
        let sets = p2_to_sets(g).sets;
        for (q, k) in [(2u32, 1usize), (2, 2), (3, 2)] {
            let oracle = p2pack_oracle(g, k, q).unwrap();
            record(format!("{name} q={q} k={k} set oracle"), oracle, setpack_oracle(&sets, k, q).unwrap());
            let c = build_setpack_circuit(&sets, k).unwrap().unwrap();
            let degree = 3 * k as u32;
            record(format!("{name} q={q} k={k} randomized"), oracle, randomized(&c, q, degree));
            record(format!("{name} q={q} k={k} deterministic"), oracle, dtm_test(&c, q, degree).unwrap().answer.is_yes());
        }
    }
    verdict(
        8,
        "end-to-end applications",
        mismatches.is_empty(),
        format!(
            "{} checks, {} mismatches {:?}, {}",
            rows.len(),
            mismatches.len(),
            mismatches,
            secs(start.elapsed())
        ),
    );
}

// ---------------------------------------------------------------------------

/// 50 random 2-sets over 100 items.
fn scale_instance() -> SetSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let members: Vec<Vec<String>> = (0..50)
        .map(|_| {
            let a = rng.random_range(1..=100u32);
            let mut b = rng.random_range(1..=99u32);
            if b >= a {
                b += 1;
            }
            vec![a.to_string(), b.to_string()]
        })
        .collect();
    SetSystem::new(&members, 2, false).unwrap()
}

#[test]
fn criterion_9_scale_smoke() {
    let sets = scale_instance();
    let c = build_setpack_circuit(&sets, 5).unwrap().unwrap();
    let params = TestParams::new(2, 10).seed(42);
    let run = |threads: usize| -> (TestReport, Duration) {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let start = Instant::now();
        let report = pool.install(|| rtm_test(&c, &params).unwrap());
        (report, start.elapsed())
    };
    let (one, t1) = run(1);
    let (eight, t8) = run(8);
    let identical = one.without_timings().to_json() == eight.without_timings().to_json();
    let pass = identical && t1 < Duration::from_secs(60) && t8 < Duration::from_secs(60);
    verdict(
        9,
        "scale smoke test",
        pass,
        format!(
            "setpack m=2 k=5 |S|=50 (s={}, d={:?}), {} trials: answer {:?}, 1 thread {}, 8 threads {}, reports byte-identical: {identical}",
            one.s,
            one.d,
            one.trials_run,
            one.answer,
            secs(t1),
            secs(t8)
        ),
    );
    assert_eq!(one.answer, Answer::Yes);
}
