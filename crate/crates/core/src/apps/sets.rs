//! Set systems, the generalized m-set k-packing polynomial and the
//! P2-packing reduction.

use std::collections::BTreeMap;

use super::graph::{Graph, ORACLE_STEP_BUDGET};
use crate::circuit::{Circuit, CircuitBuilder, GateId};
use crate::error::{Error, Result};

/// A family of m-element sets over named items. Items are numbered in order
/// of first appearance; each member is stored as sorted item indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSystem {
    universe: Vec<String>,
    members: Vec<Vec<usize>>,
    m: usize,
}

impl SetSystem {
    /// Validates that every member has exactly `m` distinct items. With
    /// `strict`, m must also be at least 3.
    pub fn new<S: AsRef<str>>(members: &[Vec<S>], m: usize, strict: bool) -> Result<SetSystem> {
        if m == 0 {
            return Err(Error::param("member size m must be at least 1"));
        }
        if strict && m < 3 {
            return Err(Error::param(format!("strict mode requires m >= 3, got {m}")));
        }
        let mut universe: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut out = Vec::with_capacity(members.len());
        for (line, member) in members.iter().enumerate() {
            if member.len() != m {
                return Err(Error::Format(format!(
                    "member {} has {} items, expected {m}",
                    line + 1,
                    member.len()
                )));
            }
            let mut ids = Vec::with_capacity(m);
            for item in member {
                let item = item.as_ref();
                if item.is_empty() || item.contains(':') {
                    return Err(Error::Format(format!(
                        "item name `{item}` is empty or uses the reserved character ':'"
                    )));
                }
                let id = *index.entry(item.to_string()).or_insert_with(|| {
                    universe.push(item.to_string());
                    universe.len() - 1
                });
                ids.push(id);
            }
            ids.sort_unstable();
            if ids.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Format(format!("member {} repeats an item", line + 1)));
            }
            out.push(ids);
        }
        Ok(SetSystem {
            universe,
            members: out,
            m,
        })
    }

    /// One member per non-blank line, items separated by whitespace.
    pub fn parse(text: &str, m: usize, strict: bool) -> Result<SetSystem> {
        let members: Vec<Vec<&str>> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| l.split_whitespace().collect())
            .collect();
        SetSystem::new(&members, m, strict)
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members as item-name lists.
    pub fn named_members(&self) -> Vec<Vec<&str>> {
        self.members
            .iter()
            .map(|ids| ids.iter().map(|&i| self.universe[i].as_str()).collect())
            .collect()
    }
}

/// Circuit for (Σ_A f(A))^k with f(A) the product of A's items: k separate
/// copies of the sum joined by a left-deep chain of x gates. Only item
/// terminals are shared, so the circuit is tree-like. Returns `None` for an
/// empty system (the zero polynomial).
pub fn build_setpack_circuit(s: &SetSystem, k: usize) -> Result<Option<Circuit>> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    if s.is_empty() {
        return Ok(None);
    }
    let mut b = CircuitBuilder::new();
    let terminals: Vec<GateId> = s.universe.iter().map(|name| b.var(name)).collect();
    let mut root: Option<GateId> = None;
    for _ in 0..k {
        let products: Vec<GateId> = s
            .members
            .iter()
            .map(|ids| {
                let factors: Vec<GateId> = ids.iter().map(|&i| terminals[i]).collect();
                b.product(&factors)
            })
            .collect();
        let sum = b.add(products);
        root = Some(match root {
            None => sum,
            Some(acc) => b.mul(acc, sum),
        });
    }
    b.finish(root.expect("k >= 1")).map(Some)
}

/// Visits multisets of `k` indices from 0..len in non-decreasing order,
/// keeping per-item counts; stops at the first accepted selection.
fn search_multisets(
    members: &[Vec<usize>],
    items: usize,
    k: usize,
    q: u32,
) -> Result<bool> {
    let mut count = vec![0u32; items];
    let mut steps = 0u64;
    fn rec(
        from: usize,
        left: usize,
        members: &[Vec<usize>],
        count: &mut [u32],
        q: u32,
        steps: &mut u64,
    ) -> Result<bool> {
        *steps += 1;
        if *steps > ORACLE_STEP_BUDGET {
            return Err(Error::Budget(format!(
                "multiset enumeration exceeds {ORACLE_STEP_BUDGET} steps"
            )));
        }
        if left == 0 {
            return Ok(true);
        }
        for idx in from..members.len() {
            let member = &members[idx];
            if member.iter().all(|&i| count[i] + 1 < q) {
                member.iter().for_each(|&i| count[i] += 1);
                let found = rec(idx, left - 1, members, count, q, steps)?;
                member.iter().for_each(|&i| count[i] -= 1);
                if found {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
    rec(0, k, members, &mut count, q, &mut steps)
}

/// True iff some k members, repetition allowed, cover every item at most
/// q-1 times. For q = 2 this is ordinary disjoint k-packing.
pub fn setpack_oracle(s: &SetSystem, k: usize, q: u32) -> Result<bool> {
    if k == 0 || q < 2 {
        return Err(Error::param("setpack oracle needs k >= 1 and q >= 2"));
    }
    search_multisets(&s.members, s.universe.len(), k, q)
}

/// The 3-sets of P2 paths (simple paths a - b - c) of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P2Sets {
    /// Vertex sets, items named by vertex number.
    pub sets: SetSystem,
    /// For each member, the centers b of the paths with that vertex set.
    pub centers: Vec<Vec<usize>>,
}

/// Every simple path a - b - c, as its vertex set {a, b, c}. Paths with the
/// same vertex set (e.g. the three paths of a triangle) become one member
/// whose centers are all recorded.
pub fn p2_to_sets(g: &Graph) -> P2Sets {
    let mut by_set: BTreeMap<[usize; 3], Vec<usize>> = BTreeMap::new();
    for (set, center) in p2_paths(g) {
        by_set.entry(set).or_default().push(center);
    }
    let members: Vec<Vec<String>> = by_set
        .keys()
        .map(|set| set.iter().map(usize::to_string).collect())
        .collect();
    let sets = SetSystem::new(&members, 3, false).expect("P2 vertex sets are 3-sets");
    P2Sets {
        sets,
        centers: by_set.into_values().collect(),
    }
}

/// All simple 2-edge paths as (sorted vertex set, center), one per
/// unordered path.
pub fn p2_paths(g: &Graph) -> Vec<([usize; 3], usize)> {
    let adj = g.adjacency();
    let mut out = Vec::new();
    for (b, nbrs) in adj.iter().enumerate().skip(1) {
        for (x, &a) in nbrs.iter().enumerate() {
            for &c in &nbrs[x + 1..] {
                let mut set = [a, b, c];
                set.sort_unstable();
                out.push((set, b));
            }
        }
    }
    out
}

/// True iff some k P2 paths of the graph, repetition allowed, use every
/// vertex at most q-1 times. Enumerates the raw paths, not the deduplicated
/// vertex sets.
pub fn p2pack_oracle(g: &Graph, k: usize, q: u32) -> Result<bool> {
    if k == 0 || q < 2 {
        return Err(Error::param("p2pack oracle needs k >= 1 and q >= 2"));
    }
    let paths: Vec<Vec<usize>> = p2_paths(g).into_iter().map(|(s, _)| s.to_vec()).collect();
    search_multisets(&paths, g.n() + 1, k, q)
}
