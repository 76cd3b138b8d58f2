use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn from_bool(b: bool) -> Answer {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Randomized,
    Deterministic,
    Oracle,
}

/// Outcome of one test run.
///
/// For randomized runs `trials_run` counts evaluations and `successes` the
/// nonzero ones; for deterministic runs they count hash functions tried and
/// those giving a nonzero polynomial. `trial_flags` has one `0`/`1` per
/// trial in index order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub answer: Answer,
    pub mode: Mode,
    pub q: u32,
    pub k: u32,
    pub d: Option<u32>,
    pub s: usize,
    pub t: usize,
    pub tree_like: bool,
    pub trials_run: usize,
    pub successes: usize,
    pub seed: Option<u64>,
    pub trial_flags: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<BTreeMap<String, f64>>,
}

impl TestReport {
    /// The report with wall-clock timings removed; what remains is a pure
    /// function of the inputs.
    pub fn without_timings(&self) -> TestReport {
        TestReport {
            elapsed_ms: None,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub(crate) fn flags_string(flags: &[bool]) -> String {
    flags.iter().map(|&f| if f { '1' } else { '0' }).collect()
}

/// Phase timer producing the `elapsed_ms` map.
pub(crate) struct Phases {
    start: Instant,
    last: Instant,
    map: BTreeMap<String, f64>,
}

impl Phases {
    pub(crate) fn start() -> Phases {
        let now = Instant::now();
        Phases {
            start: now,
            last: now,
            map: BTreeMap::new(),
        }
    }

    pub(crate) fn lap(&mut self, name: &str) {
        let now = Instant::now();
        self.map.insert(name.to_string(), ms(now - self.last));
        self.last = now;
    }

    pub(crate) fn finish(mut self) -> BTreeMap<String, f64> {
        self.map.insert("total".to_string(), ms(self.start.elapsed()));
        self.map
    }
}

fn ms(d: std::time::Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

/// Report for an identically zero polynomial, which cannot be written as a
/// circuit (e.g. a graph without any k-vertex walk): the answer is no
/// without running a tester.
pub fn zero_polynomial_report(mode: Mode, q: u32, k: u32) -> TestReport {
    TestReport {
        answer: Answer::No,
        mode,
        q,
        k,
        d: None,
        s: 0,
        t: 0,
        tree_like: true,
        trials_run: 0,
        successes: 0,
        seed: None,
        trial_flags: String::new(),
        elapsed_ms: None,
    }
}

/// Decides by full expansion; exact but exponential.
pub fn oracle_test(
    c: &crate::circuit::Circuit,
    q: u32,
    k: u32,
    cap: usize,
) -> crate::Result<TestReport> {
    if q < 2 || k == 0 {
        return Err(crate::Error::Parameter("oracle needs q >= 2 and k >= 1".into()));
    }
    let mut phases = Phases::start();
    let stats = c.stats();
    let poly = crate::circuit::expand(c, cap)?;
    phases.lap("expand");
    let yes = crate::circuit::q_monomial_oracle(&poly, q, k as u64);
    Ok(TestReport {
        answer: Answer::from_bool(yes),
        mode: Mode::Oracle,
        q,
        k,
        d: None,
        s: stats.s,
        t: stats.t,
        tree_like: stats.tree_like,
        trials_run: 0,
        successes: 0,
        seed: None,
        trial_flags: String::new(),
        elapsed_ms: Some(phases.finish()),
    })
}
