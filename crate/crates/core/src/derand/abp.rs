//! Layered algebraic branching programs read once in the z-variables.

use crate::algebra::AlgElem;
use crate::circuit::{Circuit, GateId, GateKind, VarId};
use crate::error::{Error, Result};

/// How a circuit terminal enters the branching program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbpLeaf {
    /// The symbolic variable z with this index.
    Z(usize),
    /// A group-algebra constant.
    Const(AlgElem),
}

/// An affine edge label `constant + sum coef * z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Label {
    pub constant: AlgElem,
    pub terms: Vec<(usize, AlgElem)>,
}

impl Label {
    pub fn constant(c: AlgElem) -> Label {
        Label {
            constant: c,
            terms: Vec::new(),
        }
    }

    pub fn var(k: u32, z: usize) -> Label {
        Label {
            constant: AlgElem::zero(k),
            terms: vec![(z, AlgElem::identity(k))],
        }
    }

    /// Coefficient of `z` in the label (zero if absent).
    pub fn coef(&self, z: usize) -> Option<&AlgElem> {
        self.terms.iter().find(|(v, _)| *v == z).map(|(_, c)| c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbpEdge {
    pub from: usize,
    pub to: usize,
    pub label: Label,
}

/// Layered source-sink graph. Node 0 is the source; every edge joins layer
/// l to layer l+1 and the sink is the only node of the last layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abp {
    k: u32,
    layer: Vec<usize>,
    edges: Vec<AbpEdge>,
    source: usize,
    sink: usize,
}

impl Abp {
    /// Assembles and validates a branching program.
    pub fn new(k: u32, node_count: usize, edges: Vec<AbpEdge>, source: usize, sink: usize) -> Result<Abp> {
        let invalid = |msg: String| Err(Error::param(format!("invalid branching program: {msg}")));
        if source >= node_count || sink >= node_count {
            return invalid("source or sink out of range".into());
        }
        if let Some(e) = edges.iter().find(|e| e.from >= node_count || e.to >= node_count) {
            return invalid(format!("edge {} -> {} leaves the node range", e.from, e.to));
        }
        // Layers by longest distance from the source, in topological order.
        let mut indegree = vec![0usize; node_count];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); node_count];
        for (i, e) in edges.iter().enumerate() {
            indegree[e.to] += 1;
            out[e.from].push(i);
        }
        let mut layer = vec![usize::MAX; node_count];
        layer[source] = 0;
        let mut stack = vec![source];
        let mut pending = indegree.clone();
        let mut seen = 1;
        while let Some(u) = stack.pop() {
            for &i in &out[u] {
                let v = edges[i].to;
                if layer[v] != usize::MAX && layer[v] != layer[u] + 1 {
                    return invalid(format!("node {v} is reached at two different depths"));
                }
                layer[v] = layer[u] + 1;
                pending[v] -= 1;
                if pending[v] == 0 {
                    stack.push(v);
                    seen += 1;
                }
            }
        }
        if seen != node_count || indegree[source] != 0 {
            return invalid("every node must be reachable from the source, without cycles".into());
        }
        let depth = layer[sink];
        if layer.iter().enumerate().any(|(v, &l)| l == depth && v != sink) || !out[sink].is_empty() {
            return invalid("the sink must be the only node of the last layer".into());
        }
        for e in &edges {
            let dims = std::iter::once(&e.label.constant).chain(e.label.terms.iter().map(|(_, c)| c));
            if let Some(c) = dims.into_iter().find(|c| c.dim() != k) {
                return Err(Error::DimensionMismatch { left: k, right: c.dim() });
            }
        }
        let mut seen_z: Vec<usize> = edges.iter().flat_map(|e| e.label.terms.iter().map(|t| t.0)).collect();
        let total = seen_z.len();
        seen_z.sort_unstable();
        seen_z.dedup();
        if seen_z.len() != total {
            return invalid("a z-variable labels more than one edge".into());
        }
        Ok(Abp {
            k,
            layer,
            edges,
            source,
            sink,
        })
    }

    pub fn dim(&self) -> u32 {
        self.k
    }

    pub fn node_count(&self) -> usize {
        self.layer.len()
    }

    pub fn edges(&self) -> &[AbpEdge] {
        &self.edges
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn layer(&self, node: usize) -> usize {
        self.layer[node]
    }

    /// Number of edge layers (length of every source-sink path).
    pub fn depth(&self) -> usize {
        self.layer[self.sink]
    }

    /// Nodes of each layer, in increasing node order.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.depth() + 1];
        for (v, &l) in self.layer.iter().enumerate() {
            out[l].push(v);
        }
        out
    }

    pub fn width(&self) -> usize {
        self.layers().iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Growing node/edge arena used by the recursive construction.
struct Builder {
    k: u32,
    nodes: usize,
    edges: Vec<AbpEdge>,
    /// Incoming edge indices per node, for merging sinks.
    incoming: Vec<Vec<usize>>,
}

impl Builder {
    fn node(&mut self) -> usize {
        self.nodes += 1;
        self.incoming.push(Vec::new());
        self.nodes - 1
    }

    fn edge(&mut self, from: usize, to: usize, label: Label) {
        self.incoming[to].push(self.edges.len());
        self.edges.push(AbpEdge { from, to, label });
    }

    /// Redirects every edge into `from` to `to`; `from` must have no
    /// outgoing edges. The orphaned node is removed at the end.
    fn merge_into(&mut self, from: usize, to: usize) {
        let moved = std::mem::take(&mut self.incoming[from]);
        for &i in &moved {
            self.edges[i].to = to;
        }
        self.incoming[to].extend(moved);
    }

    /// Appends the gate's program at `source`; returns (sink, length).
    fn build(
        &mut self,
        c: &Circuit,
        g: GateId,
        source: usize,
        leaf: &dyn Fn(VarId) -> AbpLeaf,
    ) -> (usize, usize) {
        let gate = c.gate(g);
        match gate.kind {
            GateKind::Var(v) => {
                let sink = self.node();
                let label = match leaf(v) {
                    AbpLeaf::Z(z) => Label::var(self.k, z),
                    AbpLeaf::Const(a) => Label::constant(a),
                };
                self.edge(source, sink, label);
                (sink, 1)
            }
            GateKind::Mul => {
                let (mid, a) = self.build(c, gate.inputs[0], source, leaf);
                let (sink, b) = self.build(c, gate.inputs[1], mid, leaf);
                (sink, a + b)
            }
            GateKind::Add => {
                let branches: Vec<(usize, usize)> = gate
                    .inputs
                    .iter()
                    .map(|&child| self.build(c, child, source, leaf))
                    .collect();
                let len = branches.iter().map(|b| b.1).max().expect("add has inputs");
                let (sink, _) = *branches.iter().find(|b| b.1 == len).expect("longest branch");
                for &(end, l) in &branches {
                    if end == sink {
                        continue;
                    }
                    if l == len {
                        self.merge_into(end, sink);
                        continue;
                    }
                    // Pad with identity edges so all paths have equal length.
                    let mut at = end;
                    for step in l..len {
                        let next = if step + 1 == len { sink } else { self.node() };
                        self.edge(at, next, Label::constant(AlgElem::identity(self.k)));
                        at = next;
                    }
                }
                (sink, len)
            }
        }
    }
}

/// Converts a tree-like circuit into a layered branching program: x gates
/// compose their inputs in series (left input first), + gates in parallel,
/// and shorter parallel branches are padded with identity edges. The
/// program's polynomial equals the circuit's polynomial in the z's.
pub fn circuit_to_abp(c: &Circuit, k: u32, leaf: impl Fn(VarId) -> AbpLeaf) -> Result<Abp> {
    c.require_tree_like()?;
    let mut z_uses = std::collections::HashMap::new();
    for g in c.gates() {
        if let GateKind::Var(v) = g.kind {
            if let AbpLeaf::Z(z) = leaf(v) {
                if z_uses.insert(z, v).is_some() {
                    return Err(Error::param(format!(
                        "z-variable {z} occurs more than once; the branching program must read each z once"
                    )));
                }
            }
        }
    }
    let mut b = Builder {
        k,
        nodes: 0,
        edges: Vec::new(),
        incoming: Vec::new(),
    };
    let source = b.node();
    let (sink, _) = b.build(c, c.root(), source, &leaf);
    // Drop nodes orphaned by merging and renumber densely.
    let mut live = vec![false; b.nodes];
    live[source] = true;
    for e in &b.edges {
        live[e.from] = true;
        live[e.to] = true;
    }
    let mut index = vec![usize::MAX; b.nodes];
    let mut next = 0;
    for v in 0..b.nodes {
        if live[v] {
            index[v] = next;
            next += 1;
        }
    }
    let edges = b
        .edges
        .into_iter()
        .map(|e| AbpEdge {
            from: index[e.from],
            to: index[e.to],
            label: e.label,
        })
        .collect();
    Abp::new(k, next, edges, index[source], index[sink])
}
