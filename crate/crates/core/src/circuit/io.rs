//! JSON circuit documents:
//!
//! ```json
//! {"gates": [{"id": 0, "op": "var", "name": "x1"},
//!            {"id": 1, "op": "mul", "in": [0, 0]}],
//!  "root": 1}
//! ```

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{canonicalize, Circuit, Gate, GateKind};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateDoc {
    pub id: u64,
    pub op: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, rename = "in", skip_serializing_if = "Option::is_none")]
    pub inputs: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitDoc {
    pub gates: Vec<GateDoc>,
    pub root: u64,
}

impl Circuit {
    pub fn from_json(text: &str) -> Result<Circuit> {
        let doc: CircuitDoc =
            serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
        Circuit::from_doc(&doc)
    }

    pub fn from_doc(doc: &CircuitDoc) -> Result<Circuit> {
        let mut index: HashMap<u64, usize> = HashMap::with_capacity(doc.gates.len());
        for (pos, g) in doc.gates.iter().enumerate() {
            if index.insert(g.id, pos).is_some() {
                return Err(Error::InvalidGate {
                    gate: g.id,
                    msg: "duplicate gate id".into(),
                });
            }
        }
        let mut vars: Vec<String> = Vec::new();
        let mut var_index: HashMap<&str, usize> = HashMap::new();
        let mut gates = Vec::with_capacity(doc.gates.len());
        for g in &doc.gates {
            let bad = |msg: &str| Error::InvalidGate {
                gate: g.id,
                msg: msg.to_string(),
            };
            let inputs = g
                .inputs
                .iter()
                .flatten()
                .map(|c| {
                    index.get(c).copied().ok_or_else(|| Error::InvalidGate {
                        gate: g.id,
                        msg: format!("input {c} does not name a gate"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let kind = match g.op.as_str() {
                "var" => {
                    let name = g.name.as_deref().ok_or_else(|| bad("var gate needs a name"))?;
                    if name.is_empty() {
                        return Err(bad("empty variable name"));
                    }
                    let next = vars.len();
                    let v = *var_index.entry(name).or_insert_with(|| {
                        vars.push(name.to_string());
                        next
                    });
                    GateKind::Var(v)
                }
                "add" | "mul" if g.name.is_some() => {
                    return Err(bad("only var gates carry a name"));
                }
                "add" => GateKind::Add,
                "mul" => GateKind::Mul,
                other => return Err(bad(&format!("unknown op `{other}`"))),
            };
            gates.push(Gate { kind, inputs });
        }
        let root = *index
            .get(&doc.root)
            .ok_or_else(|| Error::Syntax(format!("root {} does not name a gate", doc.root)))?;
        let ids: Vec<u64> = doc.gates.iter().map(|g| g.id).collect();
        let reachable = reachable_from(&gates, root);
        let circuit = canonicalize(gates, vars, root, |pos| ids[pos])?;
        if let Some(pos) = (0..ids.len()).find(|p| !reachable.contains(p)) {
            return Err(Error::InvalidGate {
                gate: ids[pos],
                msg: "unreachable from root".into(),
            });
        }
        Ok(circuit)
    }

    pub fn to_doc(&self) -> CircuitDoc {
        let gates = self
            .gates
            .iter()
            .enumerate()
            .map(|(id, g)| {
                let (op, name) = match g.kind {
                    GateKind::Var(v) => ("var", Some(self.vars[v].clone())),
                    GateKind::Add => ("add", None),
                    GateKind::Mul => ("mul", None),
                };
                GateDoc {
                    id: id as u64,
                    op: op.to_string(),
                    name,
                    inputs: (!g.is_terminal())
                        .then(|| g.inputs.iter().map(|&c| c as u64).collect()),
                }
            })
            .collect();
        CircuitDoc {
            gates,
            root: self.root() as u64,
        }
    }

    /// Canonical serialization: one gate per line.
    pub fn to_json(&self) -> String {
        let doc = self.to_doc();
        let mut out = String::from("{\n  \"gates\": [\n");
        for (i, g) in doc.gates.iter().enumerate() {
            out.push_str("    ");
            out.push_str(&serde_json::to_string(g).expect("gate serializes"));
            out.push_str(if i + 1 < doc.gates.len() { ",\n" } else { "\n" });
        }
        out.push_str(&format!("  ],\n  \"root\": {}\n}}\n", doc.root));
        out
    }
}

fn reachable_from(gates: &[Gate], root: usize) -> HashSet<usize> {
    let mut seen = HashSet::from([root]);
    let mut stack = vec![root];
    while let Some(g) = stack.pop() {
        for &c in &gates[g].inputs {
            if seen.insert(c) {
                stack.push(c);
            }
        }
    }
    seen
}
