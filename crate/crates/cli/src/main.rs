//! `monomial`: test circuits and application instances for q-monomials.

mod bench;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monomial_core::apps::{
    build_kpath_circuit, build_setpack_circuit, kpath_oracle, p2_to_sets, p2pack_oracle,
    setpack_oracle, Graph, SetSystem,
};
use monomial_core::circuit::{Circuit, DEFAULT_EXPANSION_CAP};
use monomial_core::{
    dtm_test, oracle_test, rtm_test, zero_polynomial_report, Answer, Error, Mode, TestParams,
    TestReport,
};

const EXIT_YES: u8 = 0;
const EXIT_USAGE: u8 = 2;
const EXIT_FORMAT: u8 = 3;
const EXIT_BUDGET: u8 = 4;
/// With `--exit-status`, a "no" answer exits with this code.
const EXIT_NO: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "monomial", version, about = "Detect q-monomials of degree at most k")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test a circuit file.
    TestCircuit {
        /// Circuit document (JSON).
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Non-simple k-path: a walk on k vertices using each vertex at most q-1 times.
    Kpath {
        /// Graph file: `n m` then one `u v` pair per line.
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Generalized m-set k-packing: k members covering each item at most q-1 times.
    Setpack {
        /// Set-system file: one member per line.
        input: PathBuf,
        /// Member size.
        #[arg(long)]
        m: usize,
        /// Require m >= 3.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Generalized P2-packing: k paths a-b-c using each vertex at most q-1 times.
    P2pack {
        /// Graph file: `n m` then one `u v` pair per line.
        input: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Timing tables for algebra multiplication and the testers.
    Bench(bench::BenchArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Exponent bound: every variable's exponent must lie in 1..q-1.
    #[arg(long)]
    q: u32,
    /// Degree bound for circuits; number of members or paths for packing.
    #[arg(long)]
    k: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Randomized)]
    mode: ModeArg,
    /// Trials for randomized mode.
    #[arg(long, default_value_t = monomial_core::rtm::DEFAULT_TRIALS)]
    trials: usize,
    /// Master seed for randomized mode.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Exit 0 on "yes" and 3 on "no".
    #[arg(long)]
    exit_status: bool,
    /// Include per-phase wall-clock timings in the report.
    #[arg(long)]
    timings: bool,
    /// Monomial cap for oracle-mode expansion.
    #[arg(long, default_value_t = DEFAULT_EXPANSION_CAP)]
    cap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Randomized,
    Deterministic,
    Oracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Parameter(_) | Error::NotTreeLike { .. } => EXIT_USAGE,
            Error::Budget(_) | Error::ExpansionTooLarge { .. } => EXIT_BUDGET,
            Error::Syntax(_)
            | Error::InvalidGate { .. }
            | Error::Cycle { .. }
            | Error::MissingBinding(_)
            | Error::Format(_)
            | Error::DimensionMismatch { .. }
            | Error::DivisionByZero { .. } => EXIT_FORMAT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_FORMAT,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

/// Worker pool size from MONOMIAL_THREADS (unset: rayon's default).
fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("MONOMIAL_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| usage(format!("MONOMIAL_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| usage(format!("cannot configure worker threads: {e}")))
}

/// Runs the chosen tester on a circuit; `None` stands for the zero polynomial.
fn run_tester(circuit: Option<&Circuit>, run: &RunArgs, degree: u32) -> Result<TestReport, Failure> {
    let mode = match run.mode {
        ModeArg::Randomized => Mode::Randomized,
        ModeArg::Deterministic => Mode::Deterministic,
        ModeArg::Oracle => Mode::Oracle,
    };
    let Some(c) = circuit else {
        return Ok(zero_polynomial_report(mode, run.q, degree));
    };
    let report = match run.mode {
        ModeArg::Randomized => {
            let params = TestParams::new(run.q, degree).trials(run.trials).seed(run.seed);
            rtm_test(c, &params)?
        }
        ModeArg::Deterministic => {
            if !c.is_tree_like() {
                return Err(usage(
                    "deterministic mode requires a tree-like circuit (every non-terminal gate has fan-out at most one)",
                ));
            }
            dtm_test(c, run.q, degree)?
        }
        ModeArg::Oracle => oracle_test(c, run.q, degree, run.cap)?,
    };
    Ok(report)
}

/// For application oracles: the report of the combinatorial check.
fn combinatorial_report(circuit: Option<&Circuit>, run: &RunArgs, degree: u32, yes: bool) -> TestReport {
    let mut report = zero_polynomial_report(Mode::Oracle, run.q, degree);
    report.answer = Answer::from_bool(yes);
    if let Some(c) = circuit {
        let stats = c.stats();
        report.s = stats.s;
        report.t = stats.t;
        report.tree_like = stats.tree_like;
    }
    report
}

fn checked_degree(k: u32, m: usize) -> Result<u32, Failure> {
    u32::try_from(m)
        .ok()
        .and_then(|m| m.checked_mul(k))
        .ok_or_else(|| usage("m·k is too large"))
}

/// What a successful run produced.
enum Outcome {
    Report {
        report: TestReport,
        format: Format,
        exit_status: bool,
    },
    /// Output already written (benchmarks).
    Done,
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    configure_threads()?;
    let (report, run) = match &cli.command {
        Command::Bench(args) => {
            bench::run(args)?;
            return Ok(Outcome::Done);
        }
        Command::TestCircuit { input, run } => {
            let c = Circuit::from_json(&read_input(input)?)?;
            (run_tester(Some(&c), run, run.k)?, run)
        }
        Command::Kpath { input, run } => {
            let g = Graph::parse(&read_input(input)?)?;
            if run.mode == ModeArg::Deterministic {
                return Err(usage(
                    "k-path circuits share gates across levels; use randomized or oracle mode",
                ));
            }
            let c = build_kpath_circuit(&g, run.k as usize)?;
            let report = if run.mode == ModeArg::Oracle {
                let yes = kpath_oracle(&g, run.k as usize, run.q)?;
                combinatorial_report(c.as_ref(), run, run.k, yes)
            } else {
                run_tester(c.as_ref(), run, run.k)?
            };
            (report, run)
        }
        Command::Setpack { input, m, strict, run } => {
            let s = SetSystem::parse(&read_input(input)?, *m, *strict)?;
            let degree = checked_degree(run.k, *m)?;
            let c = build_setpack_circuit(&s, run.k as usize)?;
            let report = if run.mode == ModeArg::Oracle {
                let yes = setpack_oracle(&s, run.k as usize, run.q)?;
                combinatorial_report(c.as_ref(), run, degree, yes)
            } else {
                run_tester(c.as_ref(), run, degree)?
            };
            (report, run)
        }
        Command::P2pack { input, run } => {
            let g = Graph::parse(&read_input(input)?)?;
            let sets = p2_to_sets(&g).sets;
            let degree = checked_degree(run.k, 3)?;
            let c = build_setpack_circuit(&sets, run.k as usize)?;
            let report = if run.mode == ModeArg::Oracle {
                let yes = p2pack_oracle(&g, run.k as usize, run.q)?;
                combinatorial_report(c.as_ref(), run, degree, yes)
            } else {
                run_tester(c.as_ref(), run, degree)?
            };
            (report, run)
        }
    };
    let report = if run.timings {
        report
    } else {
        report.without_timings()
    };
    Ok(Outcome::Report {
        report,
        format: run.format,
        exit_status: run.exit_status,
    })
}

fn human(report: &TestReport) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| out.push_str(&format!("{k:<11} {v}\n"));
    line("answer:", format!("{:?}", report.answer).to_lowercase());
    line("mode:", format!("{:?}", report.mode).to_lowercase());
    line("q, k:", format!("{}, {}", report.q, report.k));
    if let Some(d) = report.d {
        line("field:", format!("GF(2^{d})"));
    }
    line("circuit:", format!("s = {}, t = {}, tree-like = {}", report.s, report.t, report.tree_like));
    if report.mode != Mode::Oracle {
        let unit = if report.mode == Mode::Randomized { "trials" } else { "colorings" };
        line(
            &format!("{unit}:"),
            format!("{} run, {} nonzero", report.trials_run, report.successes),
        );
    }
    if let Some(seed) = report.seed {
        line("seed:", seed.to_string());
    }
    if let Some(times) = &report.elapsed_ms {
        let parts: Vec<String> = times.iter().map(|(k, v)| format!("{k} {v:.3} ms")).collect();
        line("elapsed:", parts.join(", "));
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Report {
            report,
            format,
            exit_status,
        }) => {
            match format {
                Format::Json => print!("{}", report.to_json()),
                Format::Human => print!("{}", human(&report)),
            }
            if exit_status && !report.answer.is_yes() {
                ExitCode::from(EXIT_NO)
            } else {
                ExitCode::from(EXIT_YES)
            }
        }
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
