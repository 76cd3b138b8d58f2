//! The `bench` subcommand: aligned timing tables plus an optional JSON dump.

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use monomial_core::algebra::{alg_mul, mul_dense, AlgElem, Field, FieldElem, GroupVec};
use monomial_core::apps::{build_setpack_circuit, SetSystem};
use monomial_core::circuit::Circuit;
use monomial_core::{dtm_test, rtm_test, TestParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::Failure;

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Largest group dimension k in the algebra table.
    #[arg(long, default_value_t = 10)]
    k_max: u32,
    /// Field degree for the algebra table.
    #[arg(long, default_value_t = 16)]
    d: u32,
    /// Trials per randomized end-to-end run.
    #[arg(long, default_value_t = 16)]
    trials: usize,
    /// Write all measurements as JSON to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Serialize)]
struct AlgebraRow {
    k: u32,
    dense_us: f64,
    sparse_us: f64,
}

#[derive(Serialize)]
struct EndToEndRow {
    instance: String,
    mode: String,
    q: u32,
    k: u32,
    s: usize,
    answer: String,
    ms: f64,
}

#[derive(Serialize)]
struct BenchDump {
    field_degree: u32,
    algebra: Vec<AlgebraRow>,
    end_to_end: Vec<EndToEndRow>,
}

/// Mean wall time of `f` in microseconds, repeating until ~20 ms elapse.
fn time_us(mut f: impl FnMut()) -> f64 {
    let start = Instant::now();
    let mut reps = 0u32;
    while reps < 3 || start.elapsed().as_millis() < 20 {
        f();
        reps += 1;
    }
    start.elapsed().as_secs_f64() * 1e6 / reps as f64
}

fn random_elem(rng: &mut ChaCha8Rng, field: &Field, k: u32) -> AlgElem {
    let coeffs = (0..1usize << k)
        .map(|_| FieldElem(rng.random_range(0..field.order()) as u32))
        .collect();
    AlgElem::from_coeffs(k, coeffs).expect("length matches")
}

fn algebra_table(args: &BenchArgs) -> Result<Vec<AlgebraRow>, Failure> {
    let field = Field::new(args.d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut rows = Vec::new();
    for k in 1..=args.k_max {
        let a = random_elem(&mut rng, &field, k);
        let b = random_elem(&mut rng, &field, k);
        let shifted = AlgElem::shifted_basis(k, GroupVec(rng.random_range(1..1u32 << k)));
        let dense_us = time_us(|| {
            std::hint::black_box(mul_dense(&field, &a, &b));
        });
        let sparse_us = time_us(|| {
            std::hint::black_box(alg_mul(&field, &a, &shifted).expect("same dimension"));
        });
        rows.push(AlgebraRow { k, dense_us, sparse_us });
    }
    Ok(rows)
}

/// Disjoint-ish random m-sets over `items` items.
fn random_sets(rng: &mut ChaCha8Rng, count: usize, m: usize, items: usize) -> SetSystem {
    let members: Vec<Vec<String>> = (0..count)
        .map(|_| {
            let mut pool: Vec<usize> = (1..=items).collect();
            for i in 0..m {
                let j = rng.random_range(i..pool.len());
                pool.swap(i, j);
            }
            pool[..m].iter().map(usize::to_string).collect()
        })
        .collect();
    SetSystem::new(&members, m, false).expect("generated members are valid")
}

fn end_to_end_table(args: &BenchArgs) -> Result<Vec<EndToEndRow>, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut rows = Vec::new();
    let cases = [(2usize, 2usize, 10usize, 3u32), (2, 3, 20, 2), (3, 2, 12, 2), (2, 5, 50, 2)];
    for (m, k, count, q) in cases {
        let sets = random_sets(&mut rng, count, m, 3 * count);
        let c: Circuit = build_setpack_circuit(&sets, k)?.expect("nonempty system");
        let degree = (m * k) as u32;
        let name = format!("setpack m={m} k={k} |S|={count}");
        let start = Instant::now();
        let params = TestParams::new(q, degree).trials(args.trials).seed(7);
        let report = rtm_test(&c, &params)?;
        rows.push(EndToEndRow {
            instance: name.clone(),
            mode: "randomized".into(),
            q,
            k: degree,
            s: report.s,
            answer: format!("{:?}", report.answer).to_lowercase(),
            ms: start.elapsed().as_secs_f64() * 1e3,
        });
        if degree <= 6 && count <= 12 {
            let start = Instant::now();
            let report = dtm_test(&c, q, degree)?;
            rows.push(EndToEndRow {
                instance: name,
                mode: "deterministic".into(),
                q,
                k: degree,
                s: report.s,
                answer: format!("{:?}", report.answer).to_lowercase(),
                ms: start.elapsed().as_secs_f64() * 1e3,
            });
        }
    }
    Ok(rows)
}

pub fn run(args: &BenchArgs) -> Result<(), Failure> {
    if args.k_max == 0 || args.k_max > monomial_core::algebra::MAX_DIM {
        return Err(crate::usage(format!(
            "--k-max must lie in 1..={}",
            monomial_core::algebra::MAX_DIM
        )));
    }
    let algebra = algebra_table(args)?;
    println!("group algebra multiplication over GF(2^{})", args.d);
    println!("{:>4} {:>14} {:>14}", "k", "dense (us)", "sparse (us)");
    for r in &algebra {
        println!("{:>4} {:>14.3} {:>14.3}", r.k, r.dense_us, r.sparse_us);
    }
    println!();
    let end_to_end = end_to_end_table(args)?;
    println!("end-to-end testers ({} randomized trials)", args.trials);
    println!(
        "{:<28} {:<14} {:>3} {:>3} {:>6} {:>6} {:>12}",
        "instance", "mode", "q", "k", "s", "answer", "time (ms)"
    );
    for r in &end_to_end {
        println!(
            "{:<28} {:<14} {:>3} {:>3} {:>6} {:>6} {:>12.2}",
            r.instance, r.mode, r.q, r.k, r.s, r.answer, r.ms
        );
    }
    if let Some(path) = &args.json {
        let dump = BenchDump {
            field_degree: args.d,
            algebra,
            end_to_end,
        };
        let text = serde_json::to_string_pretty(&dump).expect("bench dump serializes");
        std::fs::write(path, text + "\n").map_err(|e| Failure {
            code: crate::EXIT_FORMAT,
            message: format!("cannot write {}: {e}", path.display()),
        })?;
    }
    Ok(())
}
