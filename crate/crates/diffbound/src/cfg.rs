//! Control-flow graphs, condition normalization and the interleaving
//! product.
//!
//! Lowering a process body threads statements between control points. A
//! `while` reuses the current point as its loop head: the body edge is
//! guarded by the condition and the exit edge by its negation, both in
//! negation normal form. After lowering, a simplification pass contracts
//! skip and literally-true guard edges, drops literally-false guard edges
//! and prunes unreachable points; pruned points are reported in the
//! diagnostics list. This keeps the graphs at their natural size (a
//! busy-wait loop is one point with a guard self-loop) and keeps the
//! interleaving product from carrying dead tuples.

use crate::ast::{CmpOp, Cond, Expr, Stmt};
use crate::bound::Coefficient;
use crate::domain::{CondNf, GuardAtom};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Label {
    Skip,
    Assign { var: usize, expr: Expr },
    Guard(Cond),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub label: Label,
}

/// An `assert` site attached to a control point. `node` is `None` when the
/// point was pruned as unreachable; the check is then vacuous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssertSite {
    pub node: Option<NodeId>,
    pub cond: Cond,
    pub line: u32,
}

/// Control-flow graph of a single process.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cfg {
    pub entry: NodeId,
    pub num_nodes: usize,
    pub edges: Vec<Edge>,
    pub asserts: Vec<AssertSite>,
    /// Human-readable notes about pruned unreachable points.
    pub diagnostics: Vec<String>,
}

/// One assert check against the analyzed graph: the source line, the raw
/// condition and every node whose invariant must refute the negation.
#[derive(Debug, Clone)]
pub struct AssertCheck {
    pub line: u32,
    pub cond: Cond,
    pub nodes: Vec<NodeId>,
}

/// Graph interface shared by single-process and product graphs; this is
/// what the fixpoint engine iterates over.
pub trait FlowGraph {
    fn num_nodes(&self) -> usize;
    fn entry(&self) -> NodeId;
    fn edges(&self) -> &[Edge];
    fn point_label(&self, n: NodeId) -> String;
    fn assert_checks(&self) -> Vec<AssertCheck>;
}

impl FlowGraph for Cfg {
    fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    fn entry(&self) -> NodeId {
        self.entry
    }

    fn edges(&self) -> &[Edge] {
        &self.edges
    }

    fn point_label(&self, n: NodeId) -> String {
        format!("({n})")
    }

    fn assert_checks(&self) -> Vec<AssertCheck> {
        self.asserts
            .iter()
            .map(|a| AssertCheck {
                line: a.line,
                cond: a.cond.clone(),
                nodes: a.node.map(|n| vec![n]).unwrap_or_default(),
            })
            .collect()
    }
}

/// Negation normal form at the source level: negations pushed down to
/// comparison atoms (a negated comparison flips its operator).
pub fn nnf(cond: &Cond, negate: bool) -> Cond {
    match cond {
        Cond::True => {
            if negate {
                Cond::False
            } else {
                Cond::True
            }
        }
        Cond::False => {
            if negate {
                Cond::True
            } else {
                Cond::False
            }
        }
        Cond::Cmp(op, a, b) => {
            let op = if negate { op.negate() } else { *op };
            Cond::Cmp(op, a.clone(), b.clone())
        }
        Cond::And(a, b) => {
            let (l, r) = (nnf(a, negate), nnf(b, negate));
            if negate {
                Cond::Or(Box::new(l), Box::new(r))
            } else {
                Cond::And(Box::new(l), Box::new(r))
            }
        }
        Cond::Or(a, b) => {
            let (l, r) = (nnf(a, negate), nnf(b, negate));
            if negate {
                Cond::And(Box::new(l), Box::new(r))
            } else {
                Cond::Or(Box::new(l), Box::new(r))
            }
        }
        Cond::Not(a) => nnf(a, !negate),
    }
}

/// Maps a condition to negation normal form with atoms turned into guard
/// atoms where the domain can express them. Over discrete coefficients a
/// strict comparison shifts by one; over dense coefficients it degrades to
/// the non-strict bound. Disequalities and non-difference atoms map to
/// `Unsupported`.
pub fn normalize_condition<C: Coefficient>(cond: &Cond) -> CondNf<C> {
    fn go<C: Coefficient>(c: &Cond) -> CondNf<C> {
        match c {
            Cond::True => CondNf::True,
            Cond::False => CondNf::False,
            Cond::And(a, b) => CondNf::And(Box::new(go(a)), Box::new(go(b))),
            Cond::Or(a, b) => CondNf::Or(Box::new(go(a)), Box::new(go(b))),
            Cond::Not(_) => unreachable!("input is in negation normal form"),
            Cond::Cmp(op, a, b) => atom(*op, a, b),
        }
    }
    go(&nnf(cond, false))
}

/// Linear shape of `lhs - rhs`: at most two variables with coefficients
/// +1/-1, plus a constant.
fn diff_shape(lhs: &Expr, rhs: &Expr) -> Option<(Option<usize>, Option<usize>, i128)> {
    // coefficient map of lhs - rhs
    fn accumulate(
        e: &Expr,
        sign: i128,
        coeffs: &mut std::collections::BTreeMap<usize, i128>,
        constant: &mut i128,
    ) -> Option<()> {
        match e {
            Expr::Const(c) => {
                *constant = constant.checked_add(sign.checked_mul(*c as i128)?)?;
                Some(())
            }
            Expr::Var(v) => {
                let slot = coeffs.entry(*v).or_insert(0);
                *slot = slot.checked_add(sign)?;
                Some(())
            }
            Expr::Neg(x) => accumulate(x, -sign, coeffs, constant),
            Expr::Add(a, b) => {
                accumulate(a, sign, coeffs, constant)?;
                accumulate(b, sign, coeffs, constant)
            }
            Expr::Sub(a, b) => {
                accumulate(a, sign, coeffs, constant)?;
                accumulate(b, -sign, coeffs, constant)
            }
            Expr::Mul(a, b) => {
                // Only constant scaling stays linear.
                fn const_value(e: &Expr) -> Option<i128> {
                    match e {
                        Expr::Const(c) => Some(*c as i128),
                        Expr::Neg(x) => const_value(x)?.checked_neg(),
                        Expr::Add(a, b) => const_value(a)?.checked_add(const_value(b)?),
                        Expr::Sub(a, b) => const_value(a)?.checked_sub(const_value(b)?),
                        Expr::Mul(a, b) => const_value(a)?.checked_mul(const_value(b)?),
                        Expr::Var(_) => None,
                    }
                }
                if let Some(k) = const_value(a) {
                    scale(b, sign.checked_mul(k)?, coeffs, constant)
                } else if let Some(k) = const_value(b) {
                    scale(a, sign.checked_mul(k)?, coeffs, constant)
                } else {
                    None
                }
            }
        }
    }
    fn scale(
        e: &Expr,
        factor: i128,
        coeffs: &mut std::collections::BTreeMap<usize, i128>,
        constant: &mut i128,
    ) -> Option<()> {
        accumulate(e, factor, coeffs, constant)
    }
    let mut coeffs = std::collections::BTreeMap::new();
    let mut constant = 0i128;
    accumulate(lhs, 1, &mut coeffs, &mut constant)?;
    accumulate(rhs, -1, &mut coeffs, &mut constant)?;
    let nonzero: Vec<(usize, i128)> = coeffs.into_iter().filter(|(_, a)| *a != 0).collect();
    match nonzero.as_slice() {
        [] => Some((None, None, constant)),
        [(v, 1)] => Some((Some(*v), None, constant)),
        [(v, -1)] => Some((None, Some(*v), constant)),
        [(p, 1), (n, -1)] => Some((Some(*p), Some(*n), constant)),
        [(n, -1), (p, 1)] => Some((Some(*p), Some(*n), constant)),
        _ => None,
    }
}

/// Maps one comparison atom. The comparison `lhs op rhs` is rewritten as
/// `pos - neg <= c` (or `= c`), where the linear shape allows it.
fn atom<C: Coefficient>(op: CmpOp, lhs: &Expr, rhs: &Expr) -> CondNf<C> {
    // Reduce >= and > to <= and < by swapping sides.
    let (op, lhs, rhs) = match op {
        CmpOp::Ge => (CmpOp::Le, rhs, lhs),
        CmpOp::Gt => (CmpOp::Lt, rhs, lhs),
        other => (other, lhs, rhs),
    };
    if op == CmpOp::Ne {
        return CondNf::Atom(GuardAtom::Unsupported);
    }
    let Some((pos, neg, constant)) = diff_shape(lhs, rhs) else {
        return CondNf::Atom(GuardAtom::Unsupported);
    };
    // lhs - rhs = pos - neg + constant, comparison against zero:
    // pos - neg <= -constant (after moving the constant right).
    let Some(bound) = constant.checked_neg() else {
        return CondNf::Atom(GuardAtom::Unsupported);
    };
    let to_c = |v: i128| C::from_i128(v);
    match op {
        CmpOp::Le | CmpOp::Lt => {
            let bound = if op == CmpOp::Lt {
                // Strict: discrete coefficients shift by one, dense ones
                // degrade soundly to the non-strict bound.
                match C::from_i128(bound) {
                    Some(c) => match c.predecessor() {
                        Some(p) => Some(p),
                        None => Some(c),
                    },
                    None => None,
                }
            } else {
                to_c(bound)
            };
            let Some(c) = bound else {
                return CondNf::Atom(GuardAtom::Unsupported);
            };
            match (pos, neg) {
                (None, None) => {
                    if C::zero() <= c {
                        CondNf::True
                    } else {
                        CondNf::False
                    }
                }
                (Some(j), None) => CondNf::Atom(GuardAtom::Upper { j, c }),
                (None, Some(i)) => CondNf::Atom(GuardAtom::Lower { i, c }),
                (Some(j), Some(i)) => CondNf::Atom(GuardAtom::Diff { j, i, c }),
            }
        }
        CmpOp::Eq => {
            let Some(c) = to_c(bound) else {
                return CondNf::Atom(GuardAtom::Unsupported);
            };
            match (pos, neg) {
                (None, None) => {
                    if c == C::zero() {
                        CondNf::True
                    } else {
                        CondNf::False
                    }
                }
                (Some(j), None) => CondNf::Atom(GuardAtom::EqVar { j, c }),
                (None, Some(i)) => {
                    // -v_i = c, i.e. v_i = -c.
                    match c.checked_neg() {
                        Some(n) => CondNf::Atom(GuardAtom::EqVar { j: i, c: n }),
                        None => CondNf::Atom(GuardAtom::Unsupported),
                    }
                }
                (Some(j), Some(i)) => CondNf::Atom(GuardAtom::EqDiff { j, i, c }),
            }
        }
        CmpOp::Ne | CmpOp::Ge | CmpOp::Gt => unreachable!("reduced above"),
    }
}

struct Builder {
    num_nodes: usize,
    edges: Vec<Edge>,
    asserts: Vec<(NodeId, Cond, u32)>,
}

impl Builder {
    fn fresh(&mut self) -> NodeId {
        let n = self.num_nodes;
        self.num_nodes += 1;
        n
    }

    fn edge(&mut self, src: NodeId, dst: NodeId, label: Label) {
        self.edges.push(Edge { src, dst, label });
    }

    fn lower_block(&mut self, mut cur: NodeId, stmts: &[Stmt], to: NodeId) {
        if stmts.is_empty() {
            if cur != to {
                self.edge(cur, to, Label::Skip);
            }
            return;
        }
        for s in &stmts[..stmts.len() - 1] {
            cur = self.lower_stmt(cur, s, None);
        }
        self.lower_stmt(cur, &stmts[stmts.len() - 1], Some(to));
    }

    /// Lowers one statement from `cur`; `to` forces the landing point (used
    /// for the last statement of a block). Returns the landing point.
    fn lower_stmt(&mut self, cur: NodeId, s: &Stmt, to: Option<NodeId>) -> NodeId {
        match s {
            Stmt::Skip => match to {
                Some(t) => {
                    if t != cur {
                        self.edge(cur, t, Label::Skip);
                    }
                    t
                }
                None => cur,
            },
            Stmt::Assert { cond, line } => {
                self.asserts.push((cur, cond.clone(), *line));
                match to {
                    Some(t) => {
                        if t != cur {
                            self.edge(cur, t, Label::Skip);
                        }
                        t
                    }
                    None => cur,
                }
            }
            Stmt::Assign { var, expr, .. } => {
                let end = to.unwrap_or_else(|| self.fresh());
                self.edge(
                    cur,
                    end,
                    Label::Assign {
                        var: *var,
                        expr: expr.clone(),
                    },
                );
                end
            }
            Stmt::While { cond, body } => {
                let head = cur;
                let enter = nnf(cond, false);
                let exit = nnf(cond, true);
                // Branches are always lowered; a literally-false guard just
                // leaves them unconnected, to be pruned (and reported) as
                // unreachable. Dead asserts then show up as vacuous sites
                // instead of vanishing.
                let b0 = self.fresh();
                if enter != Cond::False {
                    self.edge(head, b0, Label::Guard(enter));
                }
                self.lower_block(b0, body, head);
                let end = to.unwrap_or_else(|| self.fresh());
                if exit != Cond::False {
                    self.edge(head, end, Label::Guard(exit));
                }
                end
            }
            Stmt::If {
                cond,
                then_body,
                else_body,
            } => {
                let end = to.unwrap_or_else(|| self.fresh());
                let enter = nnf(cond, false);
                let skip = nnf(cond, true);
                let t0 = self.fresh();
                if enter != Cond::False {
                    self.edge(cur, t0, Label::Guard(enter));
                }
                self.lower_block(t0, then_body, end);
                let e0 = self.fresh();
                if skip != Cond::False {
                    self.edge(cur, e0, Label::Guard(skip));
                }
                self.lower_block(e0, else_body, end);
                end
            }
        }
    }
}

/// Builds the control-flow graph of one process body.
///
/// Loop heads carry the condition on the body edge and its negation on the
/// exit edge; simplification then contracts trivial edges and prunes
/// unreachable points (recorded in `diagnostics`).
pub fn build_cfg(body: &[Stmt]) -> Cfg {
    let mut b = Builder {
        num_nodes: 0,
        edges: Vec::new(),
        asserts: Vec::new(),
    };
    let entry = b.fresh();
    let exit = b.fresh();
    b.lower_block(entry, body, exit);
    simplify(entry, b.num_nodes, b.edges, b.asserts)
}

fn simplify(
    mut entry: NodeId,
    num_nodes: usize,
    mut edges: Vec<Edge>,
    asserts: Vec<(NodeId, Cond, u32)>,
) -> Cfg {
    // Drop statically-false guard edges; they can never be taken.
    edges.retain(|e| !matches!(&e.label, Label::Guard(Cond::False)));

    // Prune control points unreachable from the entry (loop exits guarded
    // by false, branches under a false condition, code after an infinite
    // loop) before any merging, so asserts sitting on dead points become
    // vacuous sites rather than being folded into live points.
    let mut reach = vec![false; num_nodes];
    reach[entry] = true;
    let mut stack = vec![entry];
    while let Some(n) = stack.pop() {
        for e in &edges {
            if e.src == n && !reach[e.dst] {
                reach[e.dst] = true;
                stack.push(e.dst);
            }
        }
    }
    let diagnostics: Vec<String> = reach
        .iter()
        .enumerate()
        .filter(|(_, r)| !**r)
        .map(|(n, _)| format!("control point {n} is unreachable from the entry and was pruned"))
        .collect();
    edges.retain(|e| reach[e.src] && reach[e.dst]);
    let mut asserts: Vec<(Option<NodeId>, Cond, u32)> = asserts
        .into_iter()
        .map(|(n, cond, line)| (reach[n].then_some(n), cond, line))
        .collect();

    // Contract trivial edges where the merge is flow-correct: the target
    // has no other way in, or the source has no other way out. Skip edges
    // contract before literally-true guards so a `while true { skip; }`
    // keeps its guard label on the resulting self-loop.
    let mut alive = reach;
    for pass in 0..2 {
        loop {
            let trivial = |l: &Label| {
                if pass == 0 {
                    matches!(l, Label::Skip)
                } else {
                    matches!(l, Label::Skip | Label::Guard(Cond::True))
                }
            };
            let mut contracted = false;
            for idx in 0..edges.len() {
                let e = &edges[idx];
                if e.src == e.dst || !trivial(&e.label) {
                    continue;
                }
                let (u, v) = (e.src, e.dst);
                let in_v = edges.iter().filter(|x| x.dst == v).count();
                let out_u = edges.iter().filter(|x| x.src == u).count();
                let (remove, into) = if in_v == 1 {
                    (v, u) // absorb v into u
                } else if out_u == 1 {
                    (u, v) // absorb u into v
                } else {
                    continue;
                };
                edges.remove(idx);
                for x in edges.iter_mut() {
                    if x.src == remove {
                        x.src = into;
                    }
                    if x.dst == remove {
                        x.dst = into;
                    }
                }
                for (n, _, _) in asserts.iter_mut() {
                    if *n == Some(remove) {
                        *n = Some(into);
                    }
                }
                if entry == remove {
                    entry = into;
                }
                alive[remove] = false;
                contracted = true;
                break;
            }
            if !contracted {
                break;
            }
        }
    }

    // Renumber surviving nodes densely, preserving creation order.
    let mut remap = vec![usize::MAX; num_nodes];
    let mut next = 0usize;
    for (n, live) in alive.iter().enumerate() {
        if *live {
            remap[n] = next;
            next += 1;
        }
    }
    for e in edges.iter_mut() {
        e.src = remap[e.src];
        e.dst = remap[e.dst];
    }
    let out_asserts = asserts
        .into_iter()
        .map(|(n, cond, line)| AssertSite {
            node: n.map(|n| remap[n]),
            cond,
            line,
        })
        .collect();
    Cfg {
        entry: remap[entry],
        num_nodes: next,
        edges,
        asserts: out_asserts,
        diagnostics,
    }
}

/// Nondeterministic interleaving of process graphs: product points are
/// tuples of per-process points and each product edge embeds exactly one
/// process edge, the other processes standing still.
#[derive(Debug, Clone)]
pub struct ProductCfg {
    pub entry: NodeId,
    pub sizes: Vec<usize>,
    pub edges: Vec<Edge>,
    pub asserts: Vec<ProductAssert>,
}

#[derive(Debug, Clone)]
pub struct ProductAssert {
    pub line: u32,
    pub cond: Cond,
    pub nodes: Vec<NodeId>,
}

impl ProductCfg {
    pub fn num_nodes(&self) -> usize {
        self.sizes.iter().product()
    }

    /// Decodes a product index into per-process control points (first
    /// process most significant).
    pub fn tuple(&self, mut idx: NodeId) -> Vec<NodeId> {
        let mut out = vec![0; self.sizes.len()];
        for p in (0..self.sizes.len()).rev() {
            out[p] = idx % self.sizes[p];
            idx /= self.sizes[p];
        }
        out
    }

    fn index(sizes: &[usize], tuple: &[NodeId]) -> NodeId {
        let mut idx = 0;
        for (p, &t) in tuple.iter().enumerate() {
            idx = idx * sizes[p] + t;
        }
        idx
    }
}

/// Renders a per-process control point: even process positions count in
/// decimal, odd ones in letters, matching the usual presentation of
/// two-process interleavings (0..2 against a..c).
fn component_label(process: usize, node: NodeId) -> String {
    if process.is_multiple_of(2) {
        node.to_string()
    } else {
        // 0 -> a, 25 -> z, 26 -> aa, ...
        let mut n = node;
        let mut s = String::new();
        loop {
            s.insert(0, (b'a' + (n % 26) as u8) as char);
            n /= 26;
            if n == 0 {
                break;
            }
            n -= 1;
        }
        s
    }
}

impl FlowGraph for ProductCfg {
    fn num_nodes(&self) -> usize {
        self.num_nodes()
    }

    fn entry(&self) -> NodeId {
        self.entry
    }

    fn edges(&self) -> &[Edge] {
        &self.edges
    }

    fn point_label(&self, n: NodeId) -> String {
        let parts: Vec<String> = self
            .tuple(n)
            .iter()
            .enumerate()
            .map(|(p, &t)| component_label(p, t))
            .collect();
        format!("({})", parts.join(","))
    }

    fn assert_checks(&self) -> Vec<AssertCheck> {
        self.asserts
            .iter()
            .map(|a| AssertCheck {
                line: a.line,
                cond: a.cond.clone(),
                nodes: a.nodes.clone(),
            })
            .collect()
    }
}

/// Builds the interleaving product of one or more process graphs.
pub fn interleave(cfgs: &[Cfg]) -> ProductCfg {
    assert!(!cfgs.is_empty(), "need at least one process");
    let sizes: Vec<usize> = cfgs.iter().map(|c| c.num_nodes.max(1)).collect();
    let total: usize = sizes.iter().product();
    let entry_tuple: Vec<NodeId> = cfgs.iter().map(|c| c.entry).collect();
    let entry = ProductCfg::index(&sizes, &entry_tuple);

    let mut edges = Vec::new();
    let mut scratch = vec![0usize; sizes.len()];
    for idx in 0..total {
        // decode idx
        let mut rest = idx;
        for p in (0..sizes.len()).rev() {
            scratch[p] = rest % sizes[p];
            rest /= sizes[p];
        }
        for (p, cfg) in cfgs.iter().enumerate() {
            for e in &cfg.edges {
                if e.src == scratch[p] {
                    let mut dst_tuple = scratch.clone();
                    dst_tuple[p] = e.dst;
                    edges.push(Edge {
                        src: idx,
                        dst: ProductCfg::index(&sizes, &dst_tuple),
                        label: e.label.clone(),
                    });
                }
            }
        }
    }

    let mut asserts = Vec::new();
    for (p, cfg) in cfgs.iter().enumerate() {
        for site in &cfg.asserts {
            let nodes = match site.node {
                None => Vec::new(),
                Some(u) => (0..total)
                    .filter(|idx| {
                        let mut rest = *idx;
                        let mut component = 0;
                        for q in (0..sizes.len()).rev() {
                            let t = rest % sizes[q];
                            rest /= sizes[q];
                            if q == p {
                                component = t;
                            }
                        }
                        component == u
                    })
                    .collect(),
            };
            asserts.push(ProductAssert {
                line: site.line,
                cond: site.cond.clone(),
                nodes,
            });
        }
    }

    ProductCfg {
        entry,
        sizes,
        edges,
        asserts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    fn bakery() -> crate::ast::Program {
        parse_program(
            r#"
var y1, y2;
init { y1 = 0; y2 = 0; }
process p1 {
    while true {
        y1 = y2 + 1;
        while y2 != 0 and y1 > y2 { skip; }
        y1 = 0;
    }
}
process p2 {
    while true {
        y2 = y1 + 1;
        while y1 != 0 and y2 >= y1 { skip; }
        y2 = 0;
    }
}
"#,
        )
        .unwrap()
    }

    #[test]
    fn bakery_first_process_is_the_three_point_loop() {
        let p = bakery();
        let cfg = build_cfg(&p.processes[0].body);
        assert_eq!(cfg.num_nodes, 3);
        assert_eq!(cfg.entry, 0);
        assert_eq!(cfg.edges.len(), 4);
        // 0 -> 1: y1 = y2 + 1
        assert!(cfg.edges.iter().any(|e| e.src == 0
            && e.dst == 1
            && matches!(&e.label, Label::Assign { var: 1, .. })));
        // 1 -> 1: busy-wait guard
        assert!(cfg.edges.iter().any(|e| e.src == 1
            && e.dst == 1
            && matches!(&e.label, Label::Guard(Cond::And(_, _)))));
        // 1 -> 2: negated busy-wait guard (an `or` after De Morgan)
        assert!(cfg.edges.iter().any(|e| e.src == 1
            && e.dst == 2
            && matches!(&e.label, Label::Guard(Cond::Or(_, _)))));
        // 2 -> 0: y1 = 0
        assert!(cfg.edges.iter().any(|e| e.src == 2
            && e.dst == 0
            && matches!(&e.label, Label::Assign { var: 1, .. })));
        // The loop exit after `while true` is unreachable and pruned.
        assert_eq!(cfg.diagnostics.len(), 1);
    }

    #[test]
    fn empty_body_is_one_silent_point() {
        let cfg = build_cfg(&[]);
        assert_eq!(cfg.num_nodes, 1);
        assert!(cfg.edges.is_empty());
    }

    #[test]
    fn while_true_skip_is_a_guard_self_loop() {
        let p = parse_program("var x; process p { while true { skip; } }").unwrap();
        let cfg = build_cfg(&p.processes[0].body);
        assert_eq!(cfg.num_nodes, 1);
        assert_eq!(cfg.edges.len(), 1);
        let e = &cfg.edges[0];
        assert_eq!((e.src, e.dst), (0, 0));
        assert_eq!(e.label, Label::Guard(Cond::True));
        // The exit guarded by the negation (false) is reported as pruned.
        assert!(!cfg.diagnostics.is_empty());
    }

    #[test]
    fn product_of_bakery_has_nine_points() {
        let p = bakery();
        let cfgs: Vec<Cfg> = p.processes.iter().map(|pr| build_cfg(&pr.body)).collect();
        let prod = interleave(&cfgs);
        assert_eq!(prod.num_nodes(), 9);
        assert_eq!(prod.point_label(prod.entry()), "(0,a)");
        assert_eq!(prod.point_label(5), "(1,c)");
        assert_eq!(prod.point_label(8), "(2,c)");
        // Edge count: sum over processes of |edges| * product of the other
        // node counts.
        let expected: usize = (0..cfgs.len())
            .map(|p| {
                cfgs[p].edges.len()
                    * (0..cfgs.len())
                        .filter(|q| *q != p)
                        .map(|q| cfgs[q].num_nodes)
                        .product::<usize>()
            })
            .sum();
        assert_eq!(prod.edges.len(), expected);
    }

    #[test]
    fn single_process_product_is_isomorphic() {
        let p = parse_program("var x; process p { x = 1; x = 2; }").unwrap();
        let cfg = build_cfg(&p.processes[0].body);
        let prod = interleave(std::slice::from_ref(&cfg));
        assert_eq!(prod.num_nodes(), cfg.num_nodes);
        assert_eq!(prod.edges.len(), cfg.edges.len());
        assert_eq!(prod.entry(), cfg.entry);
    }

    #[test]
    fn dead_code_is_pruned_with_diagnostics_and_vacuous_asserts() {
        // Code after an infinite loop.
        let p = parse_program(
            "var x; process p { while true { skip; } x = 5; assert(x == 5); }",
        )
        .unwrap();
        let cfg = build_cfg(&p.processes[0].body);
        assert_eq!(cfg.num_nodes, 1);
        assert!(!cfg.diagnostics.is_empty());
        assert_eq!(cfg.asserts.len(), 1);
        assert_eq!(cfg.asserts[0].node, None);

        // A branch under a literally-false condition.
        let p = parse_program(
            "var x; process p { if false { assert(x == 0); } else { x = 1; } }",
        )
        .unwrap();
        let cfg = build_cfg(&p.processes[0].body);
        assert!(!cfg.diagnostics.is_empty());
        assert_eq!(cfg.asserts.len(), 1);
        assert_eq!(cfg.asserts[0].node, None, "dead assert must stay vacuous");
        // The live branch survives.
        assert!(cfg
            .edges
            .iter()
            .any(|e| matches!(e.label, Label::Assign { var: 1, .. })));

        // A loop that can never be entered.
        let p = parse_program("var x; process p { while false { x = 9; } x = 1; }").unwrap();
        let cfg = build_cfg(&p.processes[0].body);
        assert!(!cfg.diagnostics.is_empty());
        assert!(cfg.edges.iter().all(|e| match &e.label {
            Label::Assign { expr, .. } => *expr == crate::ast::Expr::Const(1),
            _ => true,
        }));
    }

    #[test]
    fn three_process_labels_alternate_digits_and_letters() {
        let p = parse_program(
            "var x; process a { x = 1; } process b { x = 2; } process c { x = 3; }",
        )
        .unwrap();
        let cfgs: Vec<Cfg> = p.processes.iter().map(|pr| build_cfg(&pr.body)).collect();
        let prod = interleave(&cfgs);
        assert_eq!(prod.point_label(prod.entry()), "(0,a,0)");
        assert_eq!(prod.num_nodes(), 8);
        // Letter rendering continues past `z`.
        assert_eq!(super::component_label(1, 25), "z");
        assert_eq!(super::component_label(1, 26), "aa");
        assert_eq!(super::component_label(1, 27), "ab");
    }

    #[test]
    fn two_self_loops_interleave_on_one_point() {
        let p = parse_program(
            "var x; process a { while true { skip; } } process b { while true { skip; } }",
        )
        .unwrap();
        let cfgs: Vec<Cfg> = p.processes.iter().map(|pr| build_cfg(&pr.body)).collect();
        let prod = interleave(&cfgs);
        assert_eq!(prod.num_nodes(), 1);
        assert_eq!(prod.edges.len(), 2);
        assert!(prod.edges.iter().all(|e| e.src == 0 && e.dst == 0));
    }

    #[test]
    fn demorgan_pushes_negation_to_atoms() {
        let p = bakery();
        let cfg = build_cfg(&p.processes[0].body);
        let exit = cfg
            .edges
            .iter()
            .find(|e| e.src == 1 && e.dst == 2)
            .unwrap();
        let Label::Guard(c) = &exit.label else { panic!() };
        // not (y2 != 0 and y1 > y2) = (y2 == 0) or (y1 <= y2)
        let Cond::Or(l, r) = c else { panic!("expected or: {c:?}") };
        assert!(matches!(**l, Cond::Cmp(CmpOp::Eq, _, _)));
        assert!(matches!(**r, Cond::Cmp(CmpOp::Le, _, _)));
    }

    #[test]
    fn atoms_map_to_guard_atoms() {
        use crate::ast::Expr::*;
        // y1 > y2 over integers: y2 - y1 <= -1.
        let c = Cond::Cmp(CmpOp::Gt, Var(1), Var(2));
        let n = normalize_condition::<i64>(&c);
        assert_eq!(n, CondNf::Atom(GuardAtom::Diff { j: 2, i: 1, c: -1 }));
        // Disequality is not expressible.
        let c = Cond::Cmp(CmpOp::Ne, Var(2), Const(0));
        assert_eq!(
            normalize_condition::<i64>(&c),
            CondNf::Atom(GuardAtom::Unsupported)
        );
        // y1 <= y2 - 1 is a difference bound.
        let c = Cond::Cmp(
            CmpOp::Le,
            Var(1),
            Sub(Box::new(Var(2)), Box::new(Const(1))),
        );
        assert_eq!(
            normalize_condition::<i64>(&c),
            CondNf::Atom(GuardAtom::Diff { j: 1, i: 2, c: -1 })
        );
        // Constant comparisons fold.
        let c = Cond::Cmp(CmpOp::Le, Const(3), Const(5));
        assert_eq!(normalize_condition::<i64>(&c), CondNf::True);
        let c = Cond::Cmp(CmpOp::Lt, Const(5), Const(3));
        assert_eq!(normalize_condition::<i64>(&c), CondNf::False);
        // Unary bounds against constants.
        let c = Cond::Cmp(CmpOp::Ge, Var(1), Const(1));
        assert_eq!(
            normalize_condition::<i64>(&c),
            CondNf::Atom(GuardAtom::Lower { i: 1, c: -1 })
        );
        // Strict bounds over the rationals degrade to non-strict.
        use crate::bound::Rational;
        let c = Cond::Cmp(CmpOp::Gt, Var(1), Var(2));
        let n = normalize_condition::<Rational>(&c);
        assert_eq!(
            n,
            CondNf::Atom(GuardAtom::Diff {
                j: 2,
                i: 1,
                c: Rational::from_int(0)
            })
        );
        // Nonlinear atoms are unsupported.
        let c = Cond::Cmp(CmpOp::Le, Mul(Box::new(Var(1)), Box::new(Var(2))), Const(4));
        assert_eq!(
            normalize_condition::<i64>(&c),
            CondNf::Atom(GuardAtom::Unsupported)
        );
    }
}
