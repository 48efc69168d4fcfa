//! Forward abstract-interpretation fixpoint engine.
//!
//! Worklist iteration in reverse postorder. Widening is applied at back-edge
//! targets once a configurable number of plain joins has happened there. The
//! incoming join is always normalized (closed, empties turned into bottom)
//! before it reaches the widening, and the stored accumulator at a widening
//! point is never re-closed afterwards; closing those accumulators breaks
//! the finite-chain property of the widening. A bounded descending phase
//! then narrows every point against its recomputed (normalized) incoming
//! value.

use std::collections::BTreeSet;

use crate::ast::{Cond, Expr, Program};
use crate::bound::{Coefficient, OverflowError};
use crate::boxdom::BoxEnv;
use crate::cfg::{self, Edge, FlowGraph, Label, NodeId};
use crate::domain::{AbstractElement, CondNf};
use crate::interval::Interval;

/// Which abstract domain the analysis runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    Dbm,
    Interval,
}

/// Coefficient set for the analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffMode {
    Integer,
    Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisOptions {
    pub domain: DomainKind,
    /// Number of plain joins at a widening point before widening starts.
    pub widening_delay: usize,
    /// Cap on descending (narrowing) sweeps.
    pub descending_steps: usize,
    pub coefficients: CoeffMode,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            domain: DomainKind::Dbm,
            widening_delay: 1,
            descending_steps: 2,
            coefficients: CoeffMode::Integer,
        }
    }
}

/// Domain interface the engine needs: lattice operations, the two
/// extrapolation operators and the transfer functions.
pub trait Domain: Clone + PartialEq + Sized {
    type Coeff: Coefficient;

    fn top(dim: usize) -> Self;
    fn bottom(dim: usize) -> Self;
    fn dim(&self) -> usize;
    fn is_bottom(&self) -> bool;
    fn join(&self, other: &Self) -> Result<Self, OverflowError>;
    fn widen(&self, rhs: &Self) -> Self;
    fn narrow(&self, rhs: &Self) -> Self;
    /// Canonical form with emptiness turned into bottom; identity for
    /// domains without hidden emptiness.
    fn normalized(&self) -> Result<Self, OverflowError>;
    fn assign(&self, var: usize, e: &Expr) -> Result<Self, OverflowError>;
    fn guard(&self, cond: &CondNf<Self::Coeff>) -> Result<Self, OverflowError>;
    /// Interval of one variable, for precision comparisons and rendering.
    fn project_var(&self, var: usize) -> Result<Interval<Self::Coeff>, OverflowError>;
}

impl<C: Coefficient> Domain for AbstractElement<C> {
    type Coeff = C;

    fn top(dim: usize) -> Self {
        AbstractElement::top(dim)
    }

    fn bottom(dim: usize) -> Self {
        AbstractElement::bottom(dim)
    }

    fn dim(&self) -> usize {
        AbstractElement::dim(self)
    }

    fn is_bottom(&self) -> bool {
        self.is_bottom()
    }

    fn join(&self, other: &Self) -> Result<Self, OverflowError> {
        AbstractElement::join(self, other)
    }

    fn widen(&self, rhs: &Self) -> Self {
        AbstractElement::widen(self, rhs)
    }

    fn narrow(&self, rhs: &Self) -> Self {
        AbstractElement::narrow(self, rhs)
    }

    fn normalized(&self) -> Result<Self, OverflowError> {
        AbstractElement::normalized(self)
    }

    fn assign(&self, var: usize, e: &Expr) -> Result<Self, OverflowError> {
        AbstractElement::assign(self, var, e)
    }

    fn guard(&self, cond: &CondNf<C>) -> Result<Self, OverflowError> {
        self.guard_cond(cond)
    }

    fn project_var(&self, var: usize) -> Result<Interval<C>, OverflowError> {
        self.project(var)
    }
}

impl<C: Coefficient> Domain for BoxEnv<C> {
    type Coeff = C;

    fn top(dim: usize) -> Self {
        BoxEnv::top(dim)
    }

    fn bottom(dim: usize) -> Self {
        BoxEnv::bottom(dim)
    }

    fn dim(&self) -> usize {
        BoxEnv::dim(self)
    }

    fn is_bottom(&self) -> bool {
        self.is_bottom()
    }

    fn join(&self, other: &Self) -> Result<Self, OverflowError> {
        Ok(BoxEnv::join(self, other))
    }

    fn widen(&self, rhs: &Self) -> Self {
        BoxEnv::widen(self, rhs)
    }

    fn narrow(&self, rhs: &Self) -> Self {
        BoxEnv::narrow(self, rhs)
    }

    fn normalized(&self) -> Result<Self, OverflowError> {
        Ok(self.clone())
    }

    fn assign(&self, var: usize, e: &Expr) -> Result<Self, OverflowError> {
        Ok(BoxEnv::assign(self, var, e))
    }

    fn guard(&self, cond: &CondNf<C>) -> Result<Self, OverflowError> {
        Ok(self.guard_cond(cond))
    }

    fn project_var(&self, var: usize) -> Result<Interval<C>, OverflowError> {
        Ok(self.interval(var))
    }
}

/// Reverse postorder of a depth-first traversal from the entry, plus the
/// set of back-edge targets.
fn depth_first(g: &impl FlowGraph) -> (Vec<NodeId>, BTreeSet<NodeId>) {
    let n = g.num_nodes();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (idx, e) in g.edges().iter().enumerate() {
        out[e.src].push(idx);
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let mut color = vec![Color::White; n];
    let mut postorder = Vec::new();
    let mut widening = BTreeSet::new();
    // Iterative DFS keeping a per-node edge cursor.
    let mut stack: Vec<(NodeId, usize)> = vec![(g.entry(), 0)];
    color[g.entry()] = Color::Gray;
    while let Some((node, cursor)) = stack.last_mut() {
        if let Some(&edge_idx) = out[*node].get(*cursor) {
            *cursor += 1;
            let dst = g.edges()[edge_idx].dst;
            match color[dst] {
                Color::White => {
                    color[dst] = Color::Gray;
                    stack.push((dst, 0));
                }
                Color::Gray => {
                    widening.insert(dst);
                }
                Color::Black => {}
            }
        } else {
            postorder.push(*node);
            color[*node] = Color::Black;
            stack.pop();
        }
    }
    postorder.reverse();
    (postorder, widening)
}

/// Control points where widening replaces join: the targets of back edges
/// of a depth-first traversal from the entry. Every cycle reachable from
/// the entry contains at least one such point.
pub fn select_widening_points(g: &impl FlowGraph) -> BTreeSet<NodeId> {
    depth_first(g).1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Proved,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssertVerdict {
    pub line: u32,
    pub verdict: Verdict,
}

/// Result of one analysis run: one normalized abstract value per control
/// point, plus a verdict per assert site.
#[derive(Debug, Clone)]
pub struct AnalysisResult<D> {
    pub values: Vec<D>,
    pub asserts: Vec<AssertVerdict>,
}

struct EdgeTransfer<C> {
    normalized_guard: Option<CondNf<C>>,
}

fn transfer<D: Domain>(
    edge: &Edge,
    pre: &EdgeTransfer<D::Coeff>,
    value: &D,
) -> Result<D, OverflowError> {
    match &edge.label {
        Label::Skip => Ok(value.clone()),
        Label::Assign { var, expr } => value.assign(*var, expr),
        Label::Guard(_) => value.guard(pre.normalized_guard.as_ref().unwrap()),
    }
}

/// Computes the abstract invariant holding at every control point of `g`.
///
/// `init` is the abstract state at the entry before any step. Ascending
/// phase: reverse-postorder worklist, joins everywhere, widening at
/// back-edge targets after the delay, the widening accumulator never
/// re-closed. Descending phase: up to `descending_steps` full sweeps of
/// `old narrow normalized(incoming)`, stopping early on stabilization.
/// Returned values are normalized; assert verdicts test whether the
/// negated condition refutes against the final invariant.
pub fn analyze<D: Domain>(
    g: &impl FlowGraph,
    init: D,
    opts: &AnalysisOptions,
) -> Result<AnalysisResult<D>, OverflowError> {
    let n = g.num_nodes();
    let (rpo, widening_points) = depth_first(g);
    let mut rpo_pos = vec![usize::MAX; n];
    for (i, &node) in rpo.iter().enumerate() {
        rpo_pos[node] = i;
    }

    let mut in_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (idx, e) in g.edges().iter().enumerate() {
        in_edges[e.dst].push(idx);
        out_edges[e.src].push(idx);
    }
    let transfers: Vec<EdgeTransfer<D::Coeff>> = g
        .edges()
        .iter()
        .map(|e| EdgeTransfer {
            normalized_guard: match &e.label {
                Label::Guard(c) => Some(cfg::normalize_condition(c)),
                _ => None,
            },
        })
        .collect();

    let entry = g.entry();
    let dim = init.dim();
    // Join of the transferred predecessor values; the entry additionally
    // receives the initial state. Always normalized (closed, empties as
    // bottom) so widening sees a closed right argument.
    let fold_incoming = |values: &[D], node: NodeId| -> Result<D, OverflowError> {
        let mut acc = if node == entry {
            init.clone()
        } else {
            D::bottom(dim)
        };
        for &idx in &in_edges[node] {
            let e = &g.edges()[idx];
            if values[e.src].is_bottom() {
                continue;
            }
            let moved = transfer(e, &transfers[idx], &values[e.src])?;
            acc = acc.join(&moved)?;
        }
        acc.normalized()
    };

    // Every point starts at bottom; the entry receives the initial state
    // through its incoming fold on the first visit.
    let mut values: Vec<D> = (0..n).map(|_| D::bottom(dim)).collect();

    // Ascending phase: reverse-postorder priority worklist.
    let mut updates = vec![0usize; n];
    let mut queued = vec![false; n];
    let mut worklist: BTreeSet<(usize, NodeId)> = BTreeSet::new();
    let push = |worklist: &mut BTreeSet<(usize, NodeId)>,
                queued: &mut Vec<bool>,
                node: NodeId| {
        if !queued[node] && rpo_pos[node] != usize::MAX {
            queued[node] = true;
            worklist.insert((rpo_pos[node], node));
        }
    };
    push(&mut worklist, &mut queued, entry);
    while let Some(&(pos, node)) = worklist.iter().next() {
        worklist.remove(&(pos, node));
        queued[node] = false;
        let inc = fold_incoming(&values, node)?;
        if inc.is_bottom() {
            continue;
        }
        let joined = values[node].join(&inc)?;
        let newv = if joined == values[node] {
            // Stable under join; widening would not change it either.
            continue;
        } else if widening_points.contains(&node) && !values[node].is_bottom() {
            // The first value arriving at a point is a seed, not a join;
            // the delay counts actual two-sided joins after that.
            if updates[node] >= opts.widening_delay {
                values[node].widen(&inc)
            } else {
                updates[node] += 1;
                joined
            }
        } else {
            joined
        };
        if newv != values[node] {
            values[node] = newv;
            for &idx in &out_edges[node] {
                push(&mut worklist, &mut queued, g.edges()[idx].dst);
            }
        }
    }

    // Descending phase: refine with narrowing, bounded number of sweeps,
    // early exit on stabilization.
    for _ in 0..opts.descending_steps {
        let mut changed = false;
        for &node in &rpo {
            let inc = fold_incoming(&values, node)?;
            let newv = values[node].narrow(&inc);
            if newv != values[node] {
                values[node] = newv;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    // Final normalization for reporting.
    for v in values.iter_mut() {
        *v = v.normalized()?;
    }

    // Assert verdicts: proved when the negated condition refutes at every
    // relevant point. Unsupported atoms in the negation fall back to the
    // whole state, which can only produce `Unknown`, never a wrong proof.
    let mut asserts = Vec::new();
    for check in g.assert_checks() {
        let negated: CondNf<D::Coeff> =
            cfg::normalize_condition(&crate::cfg::nnf(&Cond::Not(Box::new(check.cond.clone())), false));
        let mut proved = true;
        for &node in &check.nodes {
            let refuted = values[node].guard(&negated)?.normalized()?;
            if !refuted.is_bottom() {
                proved = false;
                break;
            }
        }
        asserts.push(AssertVerdict {
            line: check.line,
            verdict: if proved {
                Verdict::Proved
            } else {
                Verdict::Unknown
            },
        });
    }
    asserts.sort_by_key(|a| a.line);

    Ok(AnalysisResult { values, asserts })
}

/// Builds the initial abstract element from the program's `init` block:
/// variables not assigned there stay unconstrained. Only straight-line
/// statements are meaningful in `init`; the parser's grammar admits more,
/// so reject the rest here.
pub fn initial_state<D: Domain>(program: &Program) -> Result<D, OverflowError> {
    let mut state = D::top(program.dim());
    for stmt in &program.init {
        match stmt {
            crate::ast::Stmt::Assign { var, expr, .. } => {
                state = state.assign(*var, expr)?;
            }
            crate::ast::Stmt::Skip => {}
            other => panic!("init block only supports assignments, found {other:?}"),
        }
    }
    state.normalized()
}

/// One row of the domain comparison: the DBM projection and the interval
/// bound for one variable at one control point.
#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub point: String,
    pub var: String,
    pub dbm: String,
    pub interval: String,
    /// Whether the DBM projection is contained in the interval result.
    pub contained: bool,
}

/// Runs both domains over the same graph and compares the per-variable
/// projections point by point. The DBM projection must always be contained
/// in the interval bound; any row where it is not is flagged.
/// Paired results of one comparison run: the DBM analysis, the interval
/// analysis and the per-variable containment rows.
pub type DomainComparison<C> = (
    AnalysisResult<AbstractElement<C>>,
    AnalysisResult<BoxEnv<C>>,
    Vec<ComparisonRow>,
);

pub fn compare_domains<C: Coefficient>(
    program: &Program,
    g: &impl FlowGraph,
    opts: &AnalysisOptions,
) -> Result<DomainComparison<C>, OverflowError> {
    let dbm = analyze(g, initial_state::<AbstractElement<C>>(program)?, opts)?;
    let boxes = analyze(g, initial_state::<BoxEnv<C>>(program)?, opts)?;
    let mut rows = Vec::new();
    for node in 0..g.num_nodes() {
        for var in 1..program.dim() {
            let d = dbm.values[node].project_var(var)?;
            let b = boxes.values[node].project_var(var)?;
            rows.push(ComparisonRow {
                point: g.point_label(node),
                var: program.var_name(var).to_string(),
                contained: b.contains_interval(&d),
                dbm: d.to_string(),
                interval: b.to_string(),
            });
        }
    }
    Ok((dbm, boxes, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfg::{build_cfg, interleave, Cfg, ProductCfg};
    use crate::domain::alpha_points;
    use crate::parser::parse_program;

    fn product_of(src: &str) -> (crate::ast::Program, ProductCfg) {
        let p = parse_program(src).unwrap();
        let cfgs: Vec<Cfg> = p.processes.iter().map(|pr| build_cfg(&pr.body)).collect();
        let prod = interleave(&cfgs);
        (p, prod)
    }

    fn run_dbm(src: &str) -> (crate::ast::Program, ProductCfg, AnalysisResult<AbstractElement<i64>>) {
        let (p, prod) = product_of(src);
        let init = initial_state::<AbstractElement<i64>>(&p).unwrap();
        let r = analyze(&prod, init, &AnalysisOptions::default()).unwrap();
        (p, prod, r)
    }

    #[test]
    fn widening_points_cut_every_cycle() {
        // Acyclic graph: no widening points.
        let (_, prod) = product_of("var x; process p { x = 1; x = 2; }");
        assert!(select_widening_points(&prod).is_empty());
        // A single self-loop selects its own node.
        let (_, prod) = product_of("var x; process p { while true { skip; } }");
        let w = select_widening_points(&prod);
        assert_eq!(w.into_iter().collect::<Vec<_>>(), vec![prod.entry()]);
    }

    /// Enumerates every simple cycle of a small graph (node sequences that
    /// return to their smallest member), independently of the selection
    /// code under test.
    fn enumerate_simple_cycles(g: &ProductCfg) -> Vec<Vec<usize>> {
        let n = crate::cfg::FlowGraph::num_nodes(g);
        let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in crate::cfg::FlowGraph::edges(g) {
            if !succs[e.src].contains(&e.dst) {
                succs[e.src].push(e.dst);
            }
        }
        let mut cycles = Vec::new();
        fn walk(
            succs: &[Vec<usize>],
            start: usize,
            node: usize,
            path: &mut Vec<usize>,
            cycles: &mut Vec<Vec<usize>>,
        ) {
            for &next in &succs[node] {
                if next == start {
                    cycles.push(path.clone());
                } else if next > start && !path.contains(&next) {
                    path.push(next);
                    walk(succs, start, next, path, cycles);
                    path.pop();
                }
            }
        }
        for start in 0..n {
            let mut path = vec![start];
            walk(&succs, start, start, &mut path, &mut cycles);
        }
        cycles
    }

    #[test]
    fn widening_points_intersect_every_product_cycle() {
        let (_, prod) = product_of(
            r#"
var y1, y2;
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
        );
        let points = select_widening_points(&prod);
        let cycles = enumerate_simple_cycles(&prod);
        assert!(!cycles.is_empty());
        // Self-loop nodes must be selected, and every cycle must contain at
        // least one selected node.
        for e in crate::cfg::FlowGraph::edges(&prod) {
            if e.src == e.dst {
                assert!(points.contains(&e.src), "self-loop node not selected");
            }
        }
        for cycle in &cycles {
            assert!(
                cycle.iter().any(|n| points.contains(n)),
                "cycle {cycle:?} escapes the widening points {points:?}"
            );
        }
    }

    #[test]
    fn rational_mode_degrades_strict_guards_but_stays_sound() {
        use crate::bound::Rational;
        // With dense coefficients the strict ticket comparisons weaken to
        // non-strict ones, so the mutual-exclusion point is no longer
        // proved unreachable; it keeps only the boundary tie.
        let src = r#"
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
"#;
        let (p, prod) = product_of(src);
        let init = initial_state::<AbstractElement<Rational>>(&p).unwrap();
        let r = analyze(&prod, init, &AnalysisOptions::default()).unwrap();
        let idx_2c = (0..prod.num_nodes())
            .find(|n| prod.point_label(*n) == "(2,c)")
            .unwrap();
        let v = &r.values[idx_2c];
        assert!(!v.is_bottom());
        // The surviving states all satisfy y1 = y2: the degraded guards
        // leave exactly the tie.
        let zero = Rational::from_int(0);
        let diff_hi = v.project_var(1).unwrap(); // y1 bounds only as sanity
        assert!(!diff_hi.is_empty());
        let AbstractElement::Matrix(m) = v else { panic!() };
        let closed = m.close().unwrap().unwrap();
        assert_eq!(
            closed.get(1, 2),
            &crate::bound::Bound::Finite(zero.clone())
        );
        assert_eq!(closed.get(2, 1), &crate::bound::Bound::Finite(zero));
    }

    #[test]
    fn straight_line_is_the_point_abstraction_of_the_final_state() {
        // x = 1; y = x + 1  ->  exit state x = 1, y = 2, y - x = 1.
        let (_, prod, r) = run_dbm("var x, y; process p { x = 1; y = x + 1; }");
        // Exit point: the one without outgoing edges.
        let exit = (0..prod.num_nodes())
            .find(|n| prod.edges().iter().all(|e| e.src != *n))
            .unwrap();
        let expected = alpha_points(3, &[vec![1, 2]]).unwrap().to_element();
        assert_eq!(r.values[exit], expected);
    }

    #[test]
    fn counter_loop_narrowing_recovers_the_head_and_exit() {
        let (_, _prod, r) = run_dbm(
            "var x; init { x = 0; } process p { while x < 10 { x = x + 1; } }",
        );
        // Head is the entry (0), the loop exit is node 1.
        assert_eq!(
            r.values[0].project(1).unwrap(),
            crate::interval::Interval::bounded(0, 10)
        );
        assert_eq!(
            r.values[1].project(1).unwrap(),
            crate::interval::Interval::bounded(10, 10)
        );
    }

    #[test]
    fn asserts_report_per_source_site() {
        let (_, _, r) = run_dbm(
            "var x; init { x = 0; } process p { while x < 10 { assert(x <= 9); x = x + 1; } assert(10 <= x and x <= 10); }",
        );
        assert_eq!(r.asserts.len(), 2);
        assert!(r.asserts.iter().all(|a| a.verdict == Verdict::Proved));
        // The negation of an equality is a disequality, which the domain
        // cannot express: the check degrades to unknown, never to a proof.
        let (_, _, r) = run_dbm(
            "var x; init { x = 0; } process p { assert(x == 0); assert(x <= 0); }",
        );
        assert_eq!(r.asserts[0].verdict, Verdict::Unknown);
        assert_eq!(r.asserts[1].verdict, Verdict::Proved);
        // Nonlinear conditions degrade the same way.
        let (_, _, r) = run_dbm("var x, y; process p { assert(x * x >= 0); }");
        assert_eq!(r.asserts[0].verdict, Verdict::Unknown);
    }

    #[test]
    fn unreachable_assert_is_vacuously_proved() {
        let (_, _, r) = run_dbm(
            "var x; process p { while true { skip; } assert(x == 99); }",
        );
        assert_eq!(r.asserts.len(), 1);
        assert_eq!(r.asserts[0].verdict, Verdict::Proved);
    }

    #[test]
    fn interval_domain_runs_the_same_graph() {
        let (p, prod) = product_of(
            "var x; init { x = 0; } process p { while x < 10 { x = x + 1; } }",
        );
        let init = initial_state::<crate::boxdom::BoxEnv<i64>>(&p).unwrap();
        let r = analyze(&prod, init, &AnalysisOptions::default()).unwrap();
        assert_eq!(
            r.values[0].interval(1),
            crate::interval::Interval::bounded(0, 10)
        );
        assert_eq!(
            r.values[1].interval(1),
            crate::interval::Interval::bounded(10, 10)
        );
    }

    #[test]
    fn rational_mode_analyzes_strict_guards_soundly() {
        use crate::bound::Rational;
        let (p, prod) = product_of(
            "var x; init { x = 0; } process p { while x < 10 { x = x + 1; } }",
        );
        let init = initial_state::<AbstractElement<Rational>>(&p).unwrap();
        let r = analyze(&prod, init, &AnalysisOptions::default()).unwrap();
        // Over dense coefficients x < 10 degrades to x <= 10, so the body
        // admits x = 10 and the head narrows to [0, 11] instead of [0, 10].
        let head = r.values[0].project(1).unwrap();
        assert!(head.contains(&Rational::from_int(11)));
        assert!(!head.contains(&Rational::from_int(12)));
        // The exit guard x >= 10 stays exact.
        let exit = r.values[1].project(1).unwrap();
        assert!(!exit.contains(&Rational::from_int(9)));
        assert!(exit.contains(&Rational::from_int(10)));
    }

    #[test]
    fn compare_rows_are_all_contained() {
        let (p, prod) = product_of(
            "var x, y; init { x = 0; y = 0; } process p { while x < 3 { x = x + 1; y = x; } }",
        );
        let (_, _, rows) =
            compare_domains::<i64>(&p, &prod, &AnalysisOptions::default()).unwrap();
        assert!(rows.iter().all(|r| r.contained));
    }

    #[test]
    fn constant_assignments_project_identically_in_both_domains() {
        let (p, prod) = product_of("var x, y; process p { x = 1; y = 7; x = 2; }");
        let (_, _, rows) =
            compare_domains::<i64>(&p, &prod, &AnalysisOptions::default()).unwrap();
        for r in &rows {
            assert_eq!(r.dbm, r.interval, "{} {}", r.point, r.var);
        }
    }

    #[test]
    fn verdicts_stay_two_valued_across_widening_delays() {
        // Changing the delay shifts precision, never the verdict alphabet:
        // an assert is proved or unknown, and the analysis never aborts.
        let src = r#"
var n, i, j;
process bubble {
    i = n;
    while i >= 1 {
        j = 1;
        while j <= i - 1 {
            assert(1 <= j and j <= n);
            j = j + 1;
        }
        i = i - 1;
    }
}
"#;
        let (p, prod) = product_of(src);
        for delay in 0..=4 {
            for cap in 0..=3 {
                let opts = AnalysisOptions {
                    widening_delay: delay,
                    descending_steps: cap,
                    ..AnalysisOptions::default()
                };
                let init = initial_state::<AbstractElement<i64>>(&p).unwrap();
                let r = analyze(&prod, init, &opts).unwrap();
                assert_eq!(r.asserts.len(), 1);
            }
        }
    }
}
