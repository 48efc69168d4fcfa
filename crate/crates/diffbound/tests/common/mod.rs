//! Shared test oracles, independent of the library's algorithms:
//!
//! * pruned enumeration of the integer points satisfying a matrix;
//! * Bellman-Ford negative-cycle detection (the emptiness cross-check);
//! * seeded random matrix generators;
//! * an explicit-state concrete interpreter for corpus programs.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use diffbound::ast::{CmpOp, Cond, Expr, Program};
use diffbound::cfg::{build_cfg, interleave, Cfg, FlowGraph, Label, ProductCfg};
use diffbound::{Bound, Dbm};
use rand::Rng;

/// Box the enumeration oracles search: every coordinate in `[-32, 32]`.
pub const BOX_LO: i64 = -32;
pub const BOX_HI: i64 = 32;

/// Checks one concrete point (values of the program variables, the zero
/// variable fixed to 0) against every constraint of the matrix.
pub fn point_satisfies(m: &Dbm<i64>, point: &[i64]) -> bool {
    let dim = m.dim();
    assert_eq!(point.len(), dim - 1);
    let coord = |i: usize| if i == 0 { 0 } else { point[i - 1] };
    for i in 0..dim {
        for j in 0..dim {
            if let Bound::Finite(c) = m.get(i, j) {
                if coord(j) - coord(i) > *c {
                    return false;
                }
            }
        }
    }
    true
}

/// Enumerates all integer points of the matrix inside the box, pruning
/// whole subtrees as soon as a partial assignment violates a constraint
/// among the already-fixed variables.
pub fn enumerate_points(m: &Dbm<i64>) -> BTreeSet<Vec<i64>> {
    let dim = m.dim();
    let mut out = BTreeSet::new();
    // Constraints among the zero variable and itself rule everything out.
    for i in 0..dim {
        if let Bound::Finite(c) = m.get(i, i) {
            if *c < 0 {
                return out;
            }
        }
    }
    let mut point = vec![0i64; dim - 1];
    fn ok_prefix(m: &Dbm<i64>, point: &[i64], fixed: usize) -> bool {
        // Variables 0..=fixed are fixed (0 is the zero variable).
        let coord = |i: usize| if i == 0 { 0 } else { point[i - 1] };
        let k = fixed;
        for other in 0..=fixed {
            if let Bound::Finite(c) = m.get(other, k) {
                if coord(k) - coord(other) > *c {
                    return false;
                }
            }
            if let Bound::Finite(c) = m.get(k, other) {
                if coord(other) - coord(k) > *c {
                    return false;
                }
            }
        }
        true
    }
    fn fill(m: &Dbm<i64>, point: &mut Vec<i64>, var: usize, out: &mut BTreeSet<Vec<i64>>) {
        let dim = m.dim();
        if var == dim {
            out.insert(point.clone());
            return;
        }
        for v in BOX_LO..=BOX_HI {
            point[var - 1] = v;
            if ok_prefix(m, point, var) {
                fill(m, point, var + 1, out);
            }
        }
    }
    if dim == 1 {
        out.insert(Vec::new());
        return out;
    }
    fill(m, &mut point, 1, &mut out);
    out
}

/// Bellman-Ford negative-cycle detection on the potential graph: the
/// independent oracle for the emptiness test. Distances start at zero
/// everywhere (equivalent to a virtual source into every node); one extra
/// relaxation round after `n - 1` passes signals a negative cycle.
pub fn bellman_ford_has_negative_cycle(m: &Dbm<i64>) -> bool {
    let n = m.dim();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if let Bound::Finite(c) = m.get(i, j) {
                edges.push((i, j, *c));
            }
        }
    }
    let mut dist = vec![0i128; n];
    for _ in 0..n.saturating_sub(1) {
        let mut changed = false;
        for &(u, v, w) in &edges {
            if dist[u] + (w as i128) < dist[v] {
                dist[v] = dist[u] + w as i128;
                changed = true;
            }
        }
        if !changed {
            return false;
        }
    }
    edges
        .iter()
        .any(|&(u, v, w)| dist[u] + (w as i128) < dist[v])
}

/// Random matrix with entry density and coefficient range controlled by the
/// caller; diagonal entries stay infinite unless `with_diagonal`.
pub fn random_dbm(
    rng: &mut impl Rng,
    dim: usize,
    density: f64,
    lo: i64,
    hi: i64,
    with_diagonal: bool,
) -> Dbm<i64> {
    let mut m = Dbm::new_top(dim);
    for i in 0..dim {
        for j in 0..dim {
            if i == j && !with_diagonal {
                continue;
            }
            if rng.gen_bool(density) {
                m.set(i, j, Bound::Finite(rng.gen_range(lo..=hi)));
            }
        }
    }
    m
}

/// Random matrix whose every variable has finite lower and upper bounds, so
/// its point set is finite and inside the enumeration box.
pub fn random_bounded_dbm(rng: &mut impl Rng, dim: usize, spread: i64) -> Dbm<i64> {
    let mut m = Dbm::new_top(dim);
    for k in 1..dim {
        let lo = rng.gen_range(-spread..=spread);
        let hi = rng.gen_range(lo..=spread);
        m.set(0, k, Bound::Finite(hi));
        m.set(k, 0, Bound::Finite(-lo));
    }
    for i in 1..dim {
        for j in 1..dim {
            if i != j && rng.gen_bool(0.5) {
                m.set(i, j, Bound::Finite(rng.gen_range(-spread..=spread)));
            }
        }
    }
    m
}

/// Loads a corpus program from the workspace `programs/` directory.
pub fn load_program(name: &str) -> Program {
    let path = format!("{}/../../programs/{name}", env!("CARGO_MANIFEST_DIR"));
    let src = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {path}: {e}"));
    diffbound::parser::parse_program(&src).unwrap_or_else(|e| panic!("parse {path}: {e}"))
}

pub fn product_of(program: &Program) -> ProductCfg {
    let cfgs: Vec<Cfg> = program
        .processes
        .iter()
        .map(|p| build_cfg(&p.body))
        .collect();
    interleave(&cfgs)
}

fn eval_expr(e: &Expr, vals: &[i64]) -> i64 {
    match e {
        Expr::Const(c) => *c,
        Expr::Var(v) => vals[v - 1],
        Expr::Neg(x) => -eval_expr(x, vals),
        Expr::Add(a, b) => eval_expr(a, vals) + eval_expr(b, vals),
        Expr::Sub(a, b) => eval_expr(a, vals) - eval_expr(b, vals),
        Expr::Mul(a, b) => eval_expr(a, vals) * eval_expr(b, vals),
    }
}

fn eval_cond(c: &Cond, vals: &[i64]) -> bool {
    match c {
        Cond::True => true,
        Cond::False => false,
        Cond::Not(x) => !eval_cond(x, vals),
        Cond::And(a, b) => eval_cond(a, vals) && eval_cond(b, vals),
        Cond::Or(a, b) => eval_cond(a, vals) || eval_cond(b, vals),
        Cond::Cmp(op, a, b) => {
            let (x, y) = (eval_expr(a, vals), eval_expr(b, vals));
            match op {
                CmpOp::Lt => x < y,
                CmpOp::Le => x <= y,
                CmpOp::Eq => x == y,
                CmpOp::Ne => x != y,
                CmpOp::Ge => x >= y,
                CmpOp::Gt => x > y,
            }
        }
    }
}

/// All concrete states reached by an explicit breadth-first exploration of
/// the product graph, per control point. Programs must initialize every
/// variable in `init`. Exploration stops (and `truncated` is set) once
/// `cap` states were expanded.
pub struct ConcreteRun {
    pub per_node: Vec<BTreeSet<Vec<i64>>>,
    pub truncated: bool,
}

pub fn explore_concrete(program: &Program, product: &ProductCfg, cap: usize) -> ConcreteRun {
    let nvars = program.vars.len();
    let mut vals = vec![0i64; nvars];
    let mut assigned = vec![false; nvars];
    for stmt in &program.init {
        match stmt {
            diffbound::ast::Stmt::Assign { var, expr, .. } => {
                vals[var - 1] = eval_expr(expr, &vals);
                assigned[var - 1] = true;
            }
            diffbound::ast::Stmt::Skip => {}
            other => panic!("init statement not supported by the oracle: {other:?}"),
        }
    }
    assert!(
        assigned.iter().all(|a| *a),
        "the concrete oracle needs fully initialized programs"
    );

    let n = product.num_nodes();
    let mut per_node: Vec<BTreeSet<Vec<i64>>> = vec![BTreeSet::new(); n];
    let mut queue = VecDeque::new();
    per_node[product.entry()].insert(vals.clone());
    queue.push_back((product.entry(), vals));
    let mut expanded = 0usize;
    let mut truncated = false;
    while let Some((node, vals)) = queue.pop_front() {
        expanded += 1;
        if expanded > cap {
            truncated = true;
            break;
        }
        for e in product.edges().iter().filter(|e| e.src == node) {
            let next = match &e.label {
                Label::Skip => Some(vals.clone()),
                Label::Guard(c) => eval_cond(c, &vals).then(|| vals.clone()),
                Label::Assign { var, expr } => {
                    let mut v = vals.clone();
                    v[var - 1] = eval_expr(expr, &vals);
                    Some(v)
                }
            };
            if let Some(v) = next {
                if per_node[e.dst].insert(v.clone()) {
                    queue.push_back((e.dst, v));
                }
            }
        }
    }
    ConcreteRun { per_node, truncated }
}
