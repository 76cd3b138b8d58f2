//! Circuit reconstruction before testing.
//!
//! 1. [`duplicate`]: every + gate with fan-out l > 1 becomes l copies, one per
//!    outgoing edge (single bottom-up pass), then every terminal is split so
//!    each occurrence has its own node. The result is C*.
//! 2. [`attach_z`]: every edge of C* gets an interposed x gate with a fresh
//!    z-variable, plus one more above the root. The result is C'.
//! 3. [`replace_xy`]: every x-terminal occurrence becomes
//!    `z_1 y_i1 + ... + z_(q-1) y_i(q-1)` with fresh z's. The result is C''.
//!
//! Fresh variables are named `z:<index>` and `y:<i>:<j>`; names are derived
//! from edge ids and occurrence order, so the output is reproducible.

use serde::Serialize;

use crate::circuit::{Circuit, CircuitBuilder, Gate, GateId, GateKind, VarId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stage {
    /// C*: duplicated + gates and terminals.
    Duplicated,
    /// C': one z per edge plus the root output.
    ZAttached,
    /// C'': x-variables replaced by weighted y sums.
    Replaced,
}

/// Role of a circuit variable. `i` and `j` are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VarRole {
    X(usize),
    Y(usize, usize),
    Z(usize),
}

/// Variable bookkeeping for a transformed circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSpace {
    x_vars: Vec<String>,
    q: Option<u32>,
    z_count: usize,
    roles: Vec<VarRole>,
}

impl VarSpace {
    pub fn x_vars(&self) -> &[String] {
        &self.x_vars
    }

    pub fn n(&self) -> usize {
        self.x_vars.len()
    }

    /// q once y-variables have been introduced.
    pub fn q(&self) -> Option<u32> {
        self.q
    }

    pub fn z_count(&self) -> usize {
        self.z_count
    }

    /// Role of each circuit variable, indexed by [`VarId`].
    pub fn roles(&self) -> &[VarRole] {
        &self.roles
    }

    pub fn role(&self, v: VarId) -> VarRole {
        self.roles[v]
    }

    /// Size of the y-index range {1..(q-1)n}.
    pub fn y_count(&self) -> usize {
        self.q.map_or(0, |q| (q as usize - 1) * self.n())
    }

    /// The bijection (i, j) -> {1..(q-1)n}.
    pub fn gamma(&self, i: usize, j: usize) -> usize {
        let q = self.q.expect("gamma is defined once y-variables exist") as usize;
        debug_assert!((1..=self.n()).contains(&i) && (1..q).contains(&j));
        (i - 1) * (q - 1) + j
    }

    /// All (i, j) pairs in gamma order.
    pub fn y_vars(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let per = self.q.map_or(0, |q| q as usize - 1);
        (1..=self.n()).flat_map(move |i| (1..=per).map(move |j| (i, j)))
    }

    pub fn to_sidecar(&self) -> VarSpaceDoc {
        VarSpaceDoc {
            x_vars: self.x_vars.clone(),
            q: self.q,
            y_vars: self
                .y_vars()
                .map(|(i, j)| YVarDoc {
                    name: y_name(i, j),
                    i,
                    j,
                    gamma: self.gamma(i, j),
                })
                .collect(),
            z_vars: (0..self.z_count).map(z_name).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct YVarDoc {
    pub name: String,
    pub i: usize,
    pub j: usize,
    pub gamma: usize,
}

/// Sidecar object written next to a transformed circuit.
#[derive(Clone, Debug, Serialize)]
pub struct VarSpaceDoc {
    pub x_vars: Vec<String>,
    pub q: Option<u32>,
    pub y_vars: Vec<YVarDoc>,
    pub z_vars: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformOutput {
    pub circuit: Circuit,
    pub vars: VarSpace,
    pub stage: Stage,
}

fn z_name(index: usize) -> String {
    format!("z:{index}")
}

fn y_name(i: usize, j: usize) -> String {
    format!("y:{i}:{j}")
}

fn check_x_names(c: &Circuit) -> Result<()> {
    match c.vars().iter().find(|v| v.contains(':')) {
        Some(v) => Err(Error::param(format!(
            "variable name `{v}` uses the reserved character ':'"
        ))),
        None => Ok(()),
    }
}

/// Single bottom-up duplication pass producing C*.
pub fn duplicate(c: &Circuit) -> Circuit {
    let mut nodes: Vec<Gate> = c.gates().to_vec();
    let mut parents: Vec<Vec<(GateId, usize)>> = vec![Vec::new(); nodes.len()];
    for e in c.edges() {
        parents[e.child].push((e.parent, e.slot));
    }

    // Canonical order lists children before parents: bottom layer first.
    for g in 0..c.len() {
        if c.gate(g).kind != GateKind::Add || parents[g].len() <= 1 {
            continue;
        }
        let out_edges = std::mem::take(&mut parents[g]);
        let inputs = nodes[g].inputs.clone();
        for &child in &inputs {
            parents[child].retain(|&(p, _)| p != g);
        }
        for (parent, slot) in out_edges {
            let copy = nodes.len();
            nodes.push(Gate {
                kind: GateKind::Add,
                inputs: inputs.clone(),
            });
            parents.push(vec![(parent, slot)]);
            for (s, &child) in inputs.iter().enumerate() {
                parents[child].push((copy, s));
            }
            nodes[parent].inputs[slot] = copy;
        }
    }

    for g in 0..c.len() {
        if !nodes[g].is_terminal() {
            continue;
        }
        for (parent, slot) in std::mem::take(&mut parents[g]) {
            let copy = nodes.len();
            nodes.push(nodes[g].clone());
            parents.push(vec![(parent, slot)]);
            nodes[parent].inputs[slot] = copy;
        }
    }

    rebuild(c.vars(), nodes, c.root())
}

fn rebuild(vars: &[String], nodes: Vec<Gate>, root: GateId) -> Circuit {
    let mut b = CircuitBuilder::new();
    for v in vars {
        b.intern(v);
    }
    for g in nodes {
        b.push(g.kind, g.inputs);
    }
    b.finish(root).expect("duplication preserves validity")
}

/// Interposes a fresh z on every edge of C* and on the root output.
pub fn attach_z(cstar: &Circuit) -> Result<TransformOutput> {
    check_x_names(cstar)?;
    let mut b = CircuitBuilder::new();
    let mut image: Vec<GateId> = Vec::with_capacity(cstar.len());
    let mut edge_id = 0usize;
    for g in cstar.gates() {
        let new = match g.kind {
            GateKind::Var(v) => b.var(cstar.var_name(v)),
            kind => {
                let inputs = g
                    .inputs
                    .iter()
                    .map(|&child| {
                        let z = b.var(&z_name(edge_id));
                        edge_id += 1;
                        b.mul(z, image[child])
                    })
                    .collect();
                b.push(kind, inputs)
            }
        };
        image.push(new);
    }
    debug_assert_eq!(edge_id, cstar.edge_count());
    let z_root = b.var(&z_name(edge_id));
    let root = b.mul(z_root, image[cstar.root()]);
    let circuit = b.finish(root)?;
    let x_vars = cstar.vars().to_vec();
    let vars = classify(&circuit, x_vars, None, edge_id + 1);
    Ok(TransformOutput {
        circuit,
        vars,
        stage: Stage::ZAttached,
    })
}

/// Replaces every x occurrence in C' by a weighted sum of q-1 y-variables.
pub fn replace_xy(cprime: &TransformOutput, q: u32) -> Result<TransformOutput> {
    if q < 2 {
        return Err(Error::param(format!("q must be at least 2, got {q}")));
    }
    if cprime.stage != Stage::ZAttached {
        return Err(Error::param("replace_xy expects a C' circuit"));
    }
    let src = &cprime.circuit;
    let x_vars = cprime.vars.x_vars.clone();
    let mut next_z = cprime.vars.z_count;
    let mut b = CircuitBuilder::new();
    let mut image: Vec<GateId> = Vec::with_capacity(src.len());
    for g in src.gates() {
        let new = match g.kind {
            GateKind::Var(v) => match cprime.vars.role(v) {
                VarRole::X(i) => {
                    let branches: Vec<GateId> = (1..q as usize)
                        .map(|j| {
                            let z = b.var(&z_name(next_z));
                            next_z += 1;
                            let y = b.var(&y_name(i, j));
                            b.mul(z, y)
                        })
                        .collect();
                    if branches.len() == 1 {
                        branches[0]
                    } else {
                        b.add(branches)
                    }
                }
                _ => b.var(src.var_name(v)),
            },
            kind => {
                let inputs = g.inputs.iter().map(|&c| image[c]).collect();
                b.push(kind, inputs)
            }
        };
        image.push(new);
    }
    let circuit = b.finish(image[src.root()])?;
    let vars = classify(&circuit, x_vars, Some(q), next_z);
    Ok(TransformOutput {
        circuit,
        vars,
        stage: Stage::Replaced,
    })
}

/// C -> C* -> C' -> C''.
pub fn transform_full(c: &Circuit, q: u32) -> Result<TransformOutput> {
    if q < 2 {
        return Err(Error::param(format!("q must be at least 2, got {q}")));
    }
    check_x_names(c)?;
    let cstar = duplicate(c);
    let mut cprime = attach_z(&cstar)?;
    // Keep x indices aligned with the input circuit's variable order.
    cprime.vars = classify(&cprime.circuit, c.vars().to_vec(), None, cprime.vars.z_count);
    replace_xy(&cprime, q)
}

fn classify(circuit: &Circuit, x_vars: Vec<String>, q: Option<u32>, z_count: usize) -> VarSpace {
    let roles = circuit
        .vars()
        .iter()
        .map(|name| {
            let mut parts = name.split(':');
            match (parts.next(), parts.next(), parts.next()) {
                (Some("z"), Some(idx), None) => VarRole::Z(idx.parse().expect("fresh z name")),
                (Some("y"), Some(i), Some(j)) => VarRole::Y(
                    i.parse().expect("fresh y name"),
                    j.parse().expect("fresh y name"),
                ),
                _ => VarRole::X(
                    x_vars
                        .iter()
                        .position(|x| x == name)
                        .expect("x-variable listed in var space")
                        + 1,
                ),
            }
        })
        .collect();
    VarSpace {
        x_vars,
        q,
        z_count,
        roles,
    }
}
