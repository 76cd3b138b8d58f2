//! Arithmetic circuits over +, x and variable terminals.
//!
//! A [`Circuit`] is stored in canonical form: gates are numbered densely in a
//! topological order (every input id is smaller than its parent id), the root
//! is the last gate, and every gate is reachable from the root. Edges are the
//! (parent, input slot) pairs, numbered by parent id and then slot.

mod eval;
mod expand;
mod io;

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

pub use eval::{GroupAlgebra, Integers, ModP, Ring};
pub use expand::{
    expand, expand_over, q_monomial_oracle, Leaf, Monomial, MonomialMap, Poly,
    DEFAULT_EXPANSION_CAP,
};
pub use io::{CircuitDoc, GateDoc};

pub type GateId = usize;
pub type VarId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    Var(VarId),
    Add,
    Mul,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<GateId>,
}

impl Gate {
    pub fn is_terminal(&self) -> bool {
        matches!(self.kind, GateKind::Var(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: usize,
    pub parent: GateId,
    pub slot: usize,
    pub child: GateId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    gates: Vec<Gate>,
    vars: Vec<String>,
    fan_out: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CircuitStats {
    /// Gate count.
    pub s: usize,
    /// Longest root-to-terminal path, in edges.
    pub t: usize,
    /// Distinct variables.
    pub n: usize,
    pub tree_like: bool,
}

impl Circuit {
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[id]
    }

    pub fn root(&self) -> GateId {
        self.gates.len() - 1
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Variable names indexed by [`VarId`].
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.vars[v]
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.vars.iter().position(|v| v == name)
    }

    /// Number of (parent, slot) edges leaving each gate.
    pub fn fan_out(&self, id: GateId) -> usize {
        self.fan_out[id]
    }

    pub fn edge_count(&self) -> usize {
        self.gates.iter().map(|g| g.inputs.len()).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.gates
            .iter()
            .enumerate()
            .flat_map(|(parent, g)| {
                g.inputs
                    .iter()
                    .enumerate()
                    .map(move |(slot, &child)| (parent, slot, child))
            })
            .enumerate()
            .map(|(id, (parent, slot, child))| Edge {
                id,
                parent,
                slot,
                child,
            })
    }

    /// Every non-terminal gate has fan-out at most one.
    pub fn is_tree_like(&self) -> bool {
        self.first_shared_gate().is_none()
    }

    pub(crate) fn first_shared_gate(&self) -> Option<(GateId, usize)> {
        self.gates
            .iter()
            .enumerate()
            .find(|(id, g)| !g.is_terminal() && self.fan_out[*id] > 1)
            .map(|(id, _)| (id, self.fan_out[id]))
    }

    pub(crate) fn require_tree_like(&self) -> Result<()> {
        match self.first_shared_gate() {
            Some((gate, fan_out)) => Err(Error::NotTreeLike { gate, fan_out }),
            None => Ok(()),
        }
    }

    pub fn stats(&self) -> CircuitStats {
        // height[g] = longest path from g down to a terminal
        let mut height = vec![0usize; self.gates.len()];
        for (id, g) in self.gates.iter().enumerate() {
            height[id] = g.inputs.iter().map(|&c| height[c] + 1).max().unwrap_or(0);
        }
        CircuitStats {
            s: self.gates.len(),
            t: height[self.root()],
            n: self.vars.len(),
            tree_like: self.is_tree_like(),
        }
    }

    /// Total degree of the computed polynomial (every monomial has degree at most this).
    pub fn max_degree(&self) -> u64 {
        let mut deg = vec![0u64; self.gates.len()];
        for (id, g) in self.gates.iter().enumerate() {
            deg[id] = match g.kind {
                GateKind::Var(_) => 1,
                GateKind::Add => g.inputs.iter().map(|&c| deg[c]).max().unwrap_or(0),
                GateKind::Mul => g.inputs.iter().map(|&c| deg[c]).sum(),
            };
        }
        deg[self.root()]
    }
}

/// Incremental construction of a [`Circuit`]; `finish` validates, prunes
/// gates unreachable from the root and renumbers into canonical order.
#[derive(Clone, Debug, Default)]
pub struct CircuitBuilder {
    gates: Vec<Gate>,
    vars: Vec<String>,
    var_index: HashMap<String, VarId>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn intern(&mut self, name: &str) -> VarId {
        if let Some(&v) = self.var_index.get(name) {
            return v;
        }
        let v = self.vars.len();
        self.vars.push(name.to_string());
        self.var_index.insert(name.to_string(), v);
        v
    }

    /// A new terminal gate for `name`. Repeated calls give distinct terminal
    /// gates for the same variable.
    pub fn var(&mut self, name: &str) -> GateId {
        let v = self.intern(name);
        self.push(GateKind::Var(v), Vec::new())
    }

    pub fn add(&mut self, inputs: Vec<GateId>) -> GateId {
        self.push(GateKind::Add, inputs)
    }

    pub fn mul(&mut self, a: GateId, b: GateId) -> GateId {
        self.push(GateKind::Mul, vec![a, b])
    }

    /// Left-deep chain of binary products; a single factor is returned as is.
    pub fn product(&mut self, factors: &[GateId]) -> GateId {
        assert!(!factors.is_empty(), "empty product");
        factors[1..]
            .iter()
            .fold(factors[0], |acc, &f| self.mul(acc, f))
    }

    pub fn push(&mut self, kind: GateKind, inputs: Vec<GateId>) -> GateId {
        self.gates.push(Gate { kind, inputs });
        self.gates.len() - 1
    }

    pub fn finish(self, root: GateId) -> Result<Circuit> {
        canonicalize(self.gates, self.vars, root, |i| i as u64)
    }
}

/// Validates arity, dangling ids and acyclicity, keeps only gates reachable
/// from `root`, and renumbers them in DFS post-order. Variables that no
/// longer occur are dropped. `label` maps an input position to the id shown
/// in error messages.
fn canonicalize(
    gates: Vec<Gate>,
    vars: Vec<String>,
    root: GateId,
    label: impl Fn(usize) -> u64,
) -> Result<Circuit> {
    if root >= gates.len() {
        return Err(Error::Syntax(format!("root {} does not name a gate", label(root))));
    }
    for (id, g) in gates.iter().enumerate() {
        let bad = |msg: String| Error::InvalidGate { gate: label(id), msg };
        match g.kind {
            GateKind::Var(v) => {
                if !g.inputs.is_empty() {
                    return Err(bad("variable gate takes no inputs".into()));
                }
                if v >= vars.len() {
                    return Err(bad(format!("unknown variable index {v}")));
                }
            }
            GateKind::Add if g.inputs.is_empty() => {
                return Err(bad("add gate needs at least one input".into()));
            }
            GateKind::Mul if g.inputs.len() != 2 => {
                return Err(bad(format!(
                    "mul gate needs exactly 2 inputs, got {}",
                    g.inputs.len()
                )));
            }
            _ => {}
        }
        if let Some(&c) = g.inputs.iter().find(|&&c| c >= gates.len()) {
            return Err(bad(format!("input {c} does not name a gate")));
        }
    }

    // Iterative DFS post-order from the root with on-stack cycle detection.
    const UNSEEN: usize = usize::MAX;
    const ON_STACK: usize = usize::MAX - 1;
    let mut new_id = vec![UNSEEN; gates.len()];
    let mut order: Vec<GateId> = Vec::new();
    let mut stack: Vec<(GateId, usize)> = vec![(root, 0)];
    new_id[root] = ON_STACK;
    while let Some(&mut (g, ref mut next)) = stack.last_mut() {
        if let Some(&c) = gates[g].inputs.get(*next) {
            *next += 1;
            match new_id[c] {
                UNSEEN => {
                    new_id[c] = ON_STACK;
                    stack.push((c, 0));
                }
                ON_STACK => return Err(Error::Cycle { gate: label(c) }),
                _ => {}
            }
        } else {
            new_id[g] = order.len();
            order.push(g);
            stack.pop();
        }
    }

    let mut var_map: Vec<Option<VarId>> = vec![None; vars.len()];
    let mut new_vars = Vec::new();
    let mut new_gates = Vec::with_capacity(order.len());
    for &old in &order {
        let g = &gates[old];
        let kind = match g.kind {
            GateKind::Var(v) => GateKind::Var(*var_map[v].get_or_insert_with(|| {
                new_vars.push(vars[v].clone());
                new_vars.len() - 1
            })),
            other => other,
        };
        new_gates.push(Gate {
            kind,
            inputs: g.inputs.iter().map(|&c| new_id[c]).collect(),
        });
    }
    let mut fan_out = vec![0usize; new_gates.len()];
    for g in &new_gates {
        for &c in &g.inputs {
            fan_out[c] += 1;
        }
    }
    Ok(Circuit {
        gates: new_gates,
        vars: new_vars,
        fan_out,
    })
}
