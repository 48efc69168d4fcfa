//! Baseline non-relational box domain: one interval per variable.
//!
//! This is the comparison domain; every DBM operator is designed to be at
//! least as precise as its counterpart here.

use crate::ast::Expr;
use crate::bound::{Bound, Coefficient};
use crate::domain::{CondNf, GuardAtom};
use crate::interval::{Interval, LowerBound};

/// Per-variable interval environment; components of a non-bottom
/// environment are never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoxEnv<C> {
    Bottom { dim: usize },
    Env(Vec<Interval<C>>),
}

/// Evaluates an expression over intervals supplied by `lookup`
/// (variable index to interval). Sound enclosure; exact for single
/// operations on exact endpoints.
pub(crate) fn eval_with<C: Coefficient>(
    e: &Expr,
    lookup: &impl Fn(usize) -> Interval<C>,
) -> Interval<C> {
    match e {
        Expr::Const(c) => Interval::singleton(C::from_int(*c)),
        Expr::Var(v) => lookup(*v),
        Expr::Neg(x) => eval_with(x, lookup).neg(),
        Expr::Add(a, b) => eval_with(a, lookup).add(&eval_with(b, lookup)),
        Expr::Sub(a, b) => eval_with(a, lookup).add(&eval_with(b, lookup).neg()),
        Expr::Mul(a, b) => eval_with(a, lookup).mul(&eval_with(b, lookup)),
    }
}

/// Interval evaluation of an expression in a non-bottom environment.
///
/// # Panics
/// Panics on a bottom environment.
pub fn iv_eval<C: Coefficient>(e: &Expr, env: &BoxEnv<C>) -> Interval<C> {
    let BoxEnv::Env(itvs) = env else {
        panic!("interval evaluation needs a non-bottom environment");
    };
    eval_with(e, &|v| itvs[v - 1].clone())
}

impl<C: Coefficient> BoxEnv<C> {
    pub fn top(dim: usize) -> Self {
        assert!(dim >= 1);
        BoxEnv::Env(vec![Interval::full(); dim - 1])
    }

    pub fn bottom(dim: usize) -> Self {
        assert!(dim >= 1);
        BoxEnv::Bottom { dim }
    }

    pub fn dim(&self) -> usize {
        match self {
            BoxEnv::Bottom { dim } => *dim,
            BoxEnv::Env(itvs) => itvs.len() + 1,
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, BoxEnv::Bottom { .. })
    }

    pub fn interval(&self, var: usize) -> Interval<C> {
        match self {
            BoxEnv::Bottom { .. } => Interval::Empty,
            BoxEnv::Env(itvs) => itvs[var - 1].clone(),
        }
    }

    fn check_dims(&self, other: &Self) {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
    }

    /// Rebuilds an environment, collapsing to bottom when any component
    /// became empty.
    fn from_components(dim: usize, itvs: Vec<Interval<C>>) -> Self {
        if itvs.iter().any(Interval::is_empty) {
            BoxEnv::Bottom { dim }
        } else {
            BoxEnv::Env(itvs)
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&Interval<C>, &Interval<C>) -> Interval<C>,
    ) -> Self {
        let (BoxEnv::Env(a), BoxEnv::Env(b)) = (self, other) else {
            unreachable!("callers handle bottom");
        };
        BoxEnv::from_components(
            self.dim(),
            a.iter().zip(b.iter()).map(|(x, y)| f(x, y)).collect(),
        )
    }

    pub fn join(&self, other: &Self) -> Self {
        self.check_dims(other);
        match (self, other) {
            (BoxEnv::Bottom { .. }, x) | (x, BoxEnv::Bottom { .. }) => x.clone(),
            _ => self.zip_with(other, Interval::join),
        }
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.check_dims(other);
        match (self, other) {
            (BoxEnv::Bottom { dim }, _) | (_, BoxEnv::Bottom { dim }) => {
                BoxEnv::Bottom { dim: *dim }
            }
            _ => self.zip_with(other, Interval::meet),
        }
    }

    pub fn widen(&self, other: &Self) -> Self {
        self.check_dims(other);
        match (self, other) {
            (BoxEnv::Bottom { .. }, x) | (x, BoxEnv::Bottom { .. }) => x.clone(),
            _ => self.zip_with(other, Interval::widen),
        }
    }

    pub fn narrow(&self, other: &Self) -> Self {
        self.check_dims(other);
        match (self, other) {
            (BoxEnv::Bottom { dim }, _) | (_, BoxEnv::Bottom { dim }) => {
                BoxEnv::Bottom { dim: *dim }
            }
            _ => self.zip_with(other, Interval::narrow),
        }
    }

    /// `other` is contained in `self`, component-wise.
    pub fn contains(&self, other: &Self) -> bool {
        self.check_dims(other);
        match (other, self) {
            (BoxEnv::Bottom { .. }, _) => true,
            (_, BoxEnv::Bottom { .. }) => false,
            (BoxEnv::Env(b), BoxEnv::Env(a)) => a
                .iter()
                .zip(b.iter())
                .all(|(x, y)| x.contains_interval(y)),
        }
    }

    /// Assignment transfer: the target component becomes the interval value
    /// of the expression.
    pub fn assign(&self, k: usize, e: &Expr) -> Self {
        assert!(k >= 1 && k < self.dim(), "variable index out of range");
        let BoxEnv::Env(itvs) = self else {
            return self.clone();
        };
        let v = eval_with(e, &|v| itvs[v - 1].clone());
        let mut out = itvs.clone();
        out[k - 1] = v;
        BoxEnv::from_components(self.dim(), out)
    }

    /// Guard transfer for one atom: refines the tested variables' intervals;
    /// difference tests are projected through the other side's interval.
    pub fn guard(&self, g: &GuardAtom<C>) -> Self {
        let BoxEnv::Env(itvs) = self else {
            return self.clone();
        };
        let dim = self.dim();
        let mut out = itvs.clone();
        let refine_hi = |out: &mut Vec<Interval<C>>, v: usize, hi: Bound<C>| {
            let cur = &out[v - 1];
            out[v - 1] = cur.meet(&Interval::Range {
                lo: LowerBound::MinusInfinity,
                hi,
            });
        };
        let refine_lo = |out: &mut Vec<Interval<C>>, v: usize, lo: LowerBound<C>| {
            let cur = &out[v - 1];
            out[v - 1] = cur.meet(&Interval::Range {
                lo,
                hi: Bound::PlusInfinity,
            });
        };
        // Upper endpoint of `itv + c`, as a bound for refinement.
        let shifted_hi = |itv: &Interval<C>, c: &C| -> Option<Bound<C>> {
            match itv {
                Interval::Empty => None,
                Interval::Range { hi, .. } => match hi {
                    Bound::PlusInfinity => Some(Bound::PlusInfinity),
                    Bound::Finite(h) => h.checked_add(c).map(Bound::Finite),
                },
            }
        };
        let shifted_lo = |itv: &Interval<C>, c: &C| -> Option<LowerBound<C>> {
            match itv {
                Interval::Empty => None,
                Interval::Range { lo, .. } => match lo {
                    LowerBound::MinusInfinity => Some(LowerBound::MinusInfinity),
                    LowerBound::Finite(l) => {
                        l.checked_sub(c).map(LowerBound::Finite)
                    }
                },
            }
        };
        match g {
            GuardAtom::Unsupported => {}
            GuardAtom::Upper { j, c } => refine_hi(&mut out, *j, Bound::Finite(c.clone())),
            GuardAtom::Lower { i, c } => {
                if let Some(n) = c.checked_neg() {
                    refine_lo(&mut out, *i, LowerBound::Finite(n));
                }
            }
            GuardAtom::EqVar { j, c } => {
                out[*j - 1] = out[*j - 1].meet(&Interval::singleton(c.clone()));
            }
            GuardAtom::Diff { j, i, c } => {
                // v_j <= v_i + c and v_i >= v_j - c, projected through the
                // current intervals; the zero variable projects to [0, 0].
                let get = |out: &Vec<Interval<C>>, v: usize| -> Interval<C> {
                    if v == 0 {
                        Interval::singleton(C::zero())
                    } else {
                        out[v - 1].clone()
                    }
                };
                if *j >= 1 {
                    if let Some(hi) = shifted_hi(&get(&out, *i), c) {
                        refine_hi(&mut out, *j, hi);
                    }
                }
                if *i >= 1 {
                    if let Some(lo) = shifted_lo(&get(&out, *j), c) {
                        refine_lo(&mut out, *i, lo);
                    }
                }
            }
            GuardAtom::EqDiff { j, i, c } => {
                let le = self.guard(&GuardAtom::Diff {
                    j: *j,
                    i: *i,
                    c: c.clone(),
                });
                if let Some(n) = c.checked_neg() {
                    return le.guard(&GuardAtom::Diff { j: *i, i: *j, c: n });
                }
                return le;
            }
        }
        BoxEnv::from_components(dim, out)
    }

    pub fn guard_cond(&self, cond: &CondNf<C>) -> Self {
        match cond {
            CondNf::True => self.clone(),
            CondNf::False => BoxEnv::Bottom { dim: self.dim() },
            CondNf::Atom(g) => self.guard(g),
            CondNf::And(a, b) => self.guard_cond(a).guard_cond(b),
            CondNf::Or(a, b) => self.guard_cond(a).join(&self.guard_cond(b)),
        }
    }
}
