//! Undirected graphs and the non-simple k-path polynomial.

use std::collections::BTreeSet;

use crate::circuit::{Circuit, CircuitBuilder, GateId};
use crate::error::{Error, Result};

/// Largest number of search steps the exhaustive oracles take.
pub const ORACLE_STEP_BUDGET: u64 = 100_000_000;

/// Simple undirected graph on vertices 1..=n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Builds a graph; pairs are stored as (min, max).
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::Format(format!("self-loop at vertex {u}")));
            }
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::Format(format!("edge {u} {v} outside vertices 1..={n}")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::Format(format!("duplicate edge {u} {v}")));
            }
        }
        Ok(Graph { n, edges: set })
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Graph {
        let edges = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph is valid")
    }

    /// Path 1 - 2 - ... - n.
    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|u| (u, u + 1))).expect("path graph is valid")
    }

    /// Parses `n m` followed by m lines `u v` (1-indexed).
    pub fn parse(text: &str) -> Result<Graph> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty graph file".into()))?;
        let [n, m] = parse_pair(header)?;
        let edges = lines.map(parse_pair).collect::<Result<Vec<_>>>()?;
        if edges.len() != m {
            return Err(Error::Format(format!(
                "header announces {m} edges, found {}",
                edges.len()
            )));
        }
        Graph::new(n, edges.into_iter().map(|[u, v]| (u, v)))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    /// Neighbors of each vertex in increasing order; index 0 is unused.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

fn parse_pair(line: &str) -> Result<[usize; 2]> {
    let nums = line
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Format(format!("expected a non-negative integer, got `{t}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    match nums[..] {
        [a, b] => Ok([a, b]),
        _ => Err(Error::Format(format!("expected two integers, got `{line}`"))),
    }
}

/// Variable name of vertex `v`.
pub fn vertex_var(v: usize) -> String {
    format!("x{v}")
}

/// Circuit for Σ_i F_{k,i}, where F_{1,i} = x_i and
/// F_{l+1,i} = x_i · Σ_{j adjacent to i} F_{l,j}; each F_{l,i} is one shared
/// gate. Its monomials are the k-vertex walks (with multiplicity).
/// Returns `None` when the polynomial is identically zero (no k-vertex walk).
pub fn build_kpath_circuit(g: &Graph, k: usize) -> Result<Option<Circuit>> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    let adj = g.adjacency();
    let mut b = CircuitBuilder::new();
    let x: Vec<Option<GateId>> = (0..=g.n())
        .map(|v| (v > 0).then(|| b.var(&vertex_var(v))))
        .collect();
    let mut level: Vec<Option<GateId>> = x.clone();
    for _ in 1..k {
        let mut next = vec![None; g.n() + 1];
        for i in 1..=g.n() {
            let inputs: Vec<GateId> = adj[i].iter().filter_map(|&j| level[j]).collect();
            if inputs.is_empty() {
                continue;
            }
            let sum = b.add(inputs);
            next[i] = Some(b.mul(x[i].expect("vertex terminal"), sum));
        }
        level = next;
    }
    let tops: Vec<GateId> = level.into_iter().flatten().collect();
    if tops.is_empty() {
        return Ok(None);
    }
    let root = b.add(tops);
    b.finish(root).map(Some)
}

/// True iff some walk on k vertices uses every vertex at most q-1 times.
pub fn kpath_oracle(g: &Graph, k: usize, q: u32) -> Result<bool> {
    if k == 0 || q < 2 {
        return Err(Error::param("kpath oracle needs k >= 1 and q >= 2"));
    }
    let adj = g.adjacency();
    let mut count = vec![0u32; g.n() + 1];
    let mut steps = 0u64;
    fn walk(
        at: usize,
        left: usize,
        adj: &[Vec<usize>],
        count: &mut [u32],
        q: u32,
        steps: &mut u64,
    ) -> Result<bool> {
        *steps += 1;
        if *steps > ORACLE_STEP_BUDGET {
            return Err(Error::Budget(format!(
                "walk enumeration exceeds {ORACLE_STEP_BUDGET} steps"
            )));
        }
        if left == 0 {
            return Ok(true);
        }
        for &next in &adj[at] {
            if count[next] + 1 < q {
                count[next] += 1;
                let found = walk(next, left - 1, adj, count, q, steps)?;
                count[next] -= 1;
                if found {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
    for start in 1..=g.n() {
        count[start] = 1;
        let found = walk(start, k - 1, &adj, &mut count, q, &mut steps)?;
        count[start] = 0;
        if found {
            return Ok(true);
        }
    }
    Ok(false)
}
