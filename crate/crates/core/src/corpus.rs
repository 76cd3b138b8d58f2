//! Generators for test and benchmark circuits.

use rand::Rng;

use crate::circuit::{Circuit, CircuitBuilder, GateId};

fn var_name(i: usize) -> String {
    format!("x{}", i + 1)
}

/// Random DAG over `n` variables with `internal` + and x gates. Each gate
/// draws its inputs from all earlier gates, so sharing is common. The last
/// gate is the root; gates it does not reach are pruned.
pub fn random_dag<R: Rng + ?Sized>(rng: &mut R, n: usize, internal: usize) -> Circuit {
    assert!(n >= 1);
    let mut b = CircuitBuilder::new();
    let mut pool: Vec<GateId> = (0..n).map(|i| b.var(&var_name(i))).collect();
    for _ in 0..internal {
        let g = if rng.random_bool(0.5) {
            let a = pool[rng.random_range(0..pool.len())];
            let c = pool[rng.random_range(0..pool.len())];
            b.mul(a, c)
        } else {
            let fan_in = rng.random_range(1..=3);
            let inputs = (0..fan_in)
                .map(|_| pool[rng.random_range(0..pool.len())])
                .collect();
            b.add(inputs)
        };
        pool.push(g);
    }
    let root = *pool.last().expect("nonempty pool");
    b.finish(root).expect("generated circuit is valid")
}

/// Random tree-like circuit with `internal` + and x gates over `n`
/// variables; each variable has one shared terminal gate.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize, internal: usize) -> Circuit {
    assert!(n >= 1);
    let mut b = CircuitBuilder::new();
    let terminals: Vec<GateId> = (0..n).map(|i| b.var(&var_name(i))).collect();
    let root = grow(rng, &mut b, &terminals, internal);
    b.finish(root).expect("generated circuit is valid")
}

fn grow<R: Rng + ?Sized>(
    rng: &mut R,
    b: &mut CircuitBuilder,
    terminals: &[GateId],
    internal: usize,
) -> GateId {
    if internal == 0 {
        return terminals[rng.random_range(0..terminals.len())];
    }
    let is_mul = rng.random_bool(0.5);
    let arity = if is_mul { 2 } else { rng.random_range(1..=3) };
    // Split the remaining internal gates among the children.
    let mut budget = vec![0usize; arity];
    for _ in 0..internal - 1 {
        budget[rng.random_range(0..arity)] += 1;
    }
    let children: Vec<GateId> = budget
        .into_iter()
        .map(|sub| grow(rng, b, terminals, sub))
        .collect();
    if is_mul {
        b.mul(children[0], children[1])
    } else {
        b.add(children)
    }
}

#[derive(Clone, Debug)]
enum Shape {
    Leaf,
    Add(Vec<Shape>),
    Mul(Box<Shape>, Box<Shape>),
}

impl Shape {
    fn leaves(&self) -> usize {
        match self {
            Shape::Leaf => 1,
            Shape::Add(cs) => cs.iter().map(Shape::leaves).sum(),
            Shape::Mul(a, b) => a.leaves() + b.leaves(),
        }
    }
}

/// Every expression shape with exactly `internal` operator nodes, using x
/// with fan-in 2 and + with fan-in 2 or 3.
fn shapes(internal: usize) -> Vec<Shape> {
    if internal == 0 {
        return vec![Shape::Leaf];
    }
    let rest = internal - 1;
    let mut out = Vec::new();
    for left in 0..=rest {
        for a in shapes(left) {
            for b in shapes(rest - left) {
                out.push(Shape::Mul(Box::new(a.clone()), Box::new(b.clone())));
                out.push(Shape::Add(vec![a.clone(), b]));
            }
        }
    }
    for i in 0..=rest {
        for j in 0..=rest - i {
            for a in shapes(i) {
                for b in shapes(j) {
                    for c in shapes(rest - i - j) {
                        out.push(Shape::Add(vec![a.clone(), b.clone(), c]));
                    }
                }
            }
        }
    }
    out
}

/// Labelings of `leaves` leaves with variables 0..n in first-use order
/// (restricted growth strings), so variable renamings are not repeated.
fn labelings(leaves: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(leaves);
    fn rec(cur: &mut Vec<usize>, leaves: usize, n: usize, used: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == leaves {
            out.push(cur.clone());
            return;
        }
        for v in 0..(used + 1).min(n) {
            cur.push(v);
            rec(cur, leaves, n, used.max(v + 1), out);
            cur.pop();
        }
    }
    rec(&mut cur, leaves, n, 0, &mut out);
    out
}

/// All tree-like circuits with at most `max_gates` gates (shared terminals
/// counted once) over at most `n` variables, up to variable renaming.
pub fn exhaustive_trees(max_gates: usize, n: usize) -> Vec<Circuit> {
    let mut out = Vec::new();
    for internal in 0..max_gates {
        for shape in shapes(internal) {
            for labels in labelings(shape.leaves(), n) {
                let distinct = labels.iter().max().map_or(0, |m| m + 1);
                if internal + distinct > max_gates {
                    continue;
                }
                let mut b = CircuitBuilder::new();
                let terminals: Vec<GateId> = (0..distinct).map(|i| b.var(&var_name(i))).collect();
                let mut next = 0;
                let root = build_shape(&mut b, &shape, &terminals, &labels, &mut next);
                out.push(b.finish(root).expect("enumerated circuit is valid"));
            }
        }
    }
    out
}

fn build_shape(
    b: &mut CircuitBuilder,
    shape: &Shape,
    terminals: &[GateId],
    labels: &[usize],
    next: &mut usize,
) -> GateId {
    match shape {
        Shape::Leaf => {
            let g = terminals[labels[*next]];
            *next += 1;
            g
        }
        Shape::Add(cs) => {
            let inputs = cs
                .iter()
                .map(|c| build_shape(b, c, terminals, labels, next))
                .collect();
            b.add(inputs)
        }
        Shape::Mul(l, r) => {
            let a = build_shape(b, l, terminals, labels, next);
            let c = build_shape(b, r, terminals, labels, next);
            b.mul(a, c)
        }
    }
}
