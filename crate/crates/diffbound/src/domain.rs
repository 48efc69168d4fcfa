//! The DBM abstract domain.
//!
//! `AbstractElement` is the lattice the fixpoint engine iterates in: bottom
//! or an arbitrary matrix, where a matrix value may still denote the empty
//! set. `NormalizedElement` is the lattice of closed representatives used for
//! reporting and for the point-set abstraction: each non-empty solution set
//! has exactly one closed matrix, so the meaning function is one-to-one
//! there.
//!
//! Operator fine print, all of it load-bearing:
//!
//! * `meet` is point-wise min and exact on solution sets;
//! * `join` closes both arguments first; the result is the least solution
//!   set containing the union, and is itself closed;
//! * `widen` keeps an entry only when the right argument does not exceed it.
//!   The right argument should be closed by the caller; the accumulated left
//!   argument must NOT be re-closed between steps, or chains stop
//!   terminating;
//! * `narrow` refines only `+inf` entries, so decreasing chains are finite;
//! * transfer functions (`forget`, `guard`, `assign`) are sound
//!   over-approximations, exact in the difference-form cases.

use crate::boxdom;
use crate::bound::{Bound, Coefficient, OverflowError};
use crate::dbm::{ClosedDbm, Dbm, ZERO_VAR};
use crate::interval::{Interval, LowerBound};

use crate::ast::Expr;

/// A normalized linear test fed to the guard transfer function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GuardAtom<C> {
    /// `v_j - v_i <= c` with `i != j`, both possibly program variables.
    Diff { j: usize, i: usize, c: C },
    /// `v_j <= c`.
    Upper { j: usize, c: C },
    /// `-v_i <= c`.
    Lower { i: usize, c: C },
    /// `v_j - v_i = c`.
    EqDiff { j: usize, i: usize, c: C },
    /// `v_j = c`.
    EqVar { j: usize, c: C },
    /// A test the domain cannot represent; carries no constraint
    /// information and the guard leaves its argument unchanged.
    Unsupported,
}

/// A condition in negation normal form with atoms mapped to guard atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CondNf<C> {
    True,
    False,
    Atom(GuardAtom<C>),
    And(Box<CondNf<C>>, Box<CondNf<C>>),
    Or(Box<CondNf<C>>, Box<CondNf<C>>),
}

/// Element of the un-normalized DBM lattice. A `Matrix` value may still
/// denote the empty set; emptiness is detected at normalization points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbstractElement<C> {
    Bottom { dim: usize },
    Matrix(Dbm<C>),
}

impl<C: Coefficient> AbstractElement<C> {
    pub fn top(dim: usize) -> Self {
        AbstractElement::Matrix(Dbm::new_top(dim))
    }

    pub fn bottom(dim: usize) -> Self {
        AbstractElement::Bottom { dim }
    }

    pub fn dim(&self) -> usize {
        match self {
            AbstractElement::Bottom { dim } => *dim,
            AbstractElement::Matrix(m) => m.dim(),
        }
    }

    /// Representation-level bottom test; a `Matrix` may still denote the
    /// empty set (use [`Self::is_empty`] for the semantic question).
    pub fn is_bottom(&self) -> bool {
        matches!(self, AbstractElement::Bottom { .. })
    }

    pub fn is_empty(&self) -> Result<bool, OverflowError> {
        match self {
            AbstractElement::Bottom { .. } => Ok(true),
            AbstractElement::Matrix(m) => m.is_empty(),
        }
    }

    fn check_dims(&self, other: &Self) {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
    }

    /// Point-wise minimum; exact intersection of solution sets.
    pub fn meet(&self, other: &Self) -> Self {
        self.check_dims(other);
        match (self, other) {
            (AbstractElement::Bottom { dim }, _) | (_, AbstractElement::Bottom { dim }) => {
                AbstractElement::Bottom { dim: *dim }
            }
            (AbstractElement::Matrix(a), AbstractElement::Matrix(b)) => {
                let dim = a.dim();
                let mut out = Dbm::new_top(dim);
                for i in 0..dim {
                    for j in 0..dim {
                        out.set(i, j, a.get(i, j).clone().min(b.get(i, j).clone()));
                    }
                }
                AbstractElement::Matrix(out)
            }
        }
    }

    fn closed_part(&self) -> Result<Option<ClosedDbm<C>>, OverflowError> {
        match self {
            AbstractElement::Bottom { .. } => Ok(None),
            AbstractElement::Matrix(m) => m.close(),
        }
    }

    /// Least upper bound of solution sets. Both arguments are closed first
    /// (detected-empty arguments act as bottom); the point-wise maximum of
    /// two closed matrices is closed again.
    pub fn join(&self, other: &Self) -> Result<Self, OverflowError> {
        self.check_dims(other);
        let dim = self.dim();
        match (self.closed_part()?, other.closed_part()?) {
            (None, None) => Ok(AbstractElement::Bottom { dim }),
            (Some(a), None) => Ok(AbstractElement::Matrix(a.into_dbm())),
            (None, Some(b)) => Ok(AbstractElement::Matrix(b.into_dbm())),
            (Some(a), Some(b)) => {
                let (a, b) = (a.as_dbm(), b.as_dbm());
                let mut out = Dbm::new_top(dim);
                for i in 0..dim {
                    for j in 0..dim {
                        out.set(i, j, a.get(i, j).clone().max(b.get(i, j).clone()));
                    }
                }
                Ok(AbstractElement::Matrix(out))
            }
        }
    }

    /// Widening: keep an entry where the right argument stays below it, drop
    /// it to `+inf` where it grew. The caller passes a closed right argument
    /// for precision; the result is deliberately never closed here.
    pub fn widen(&self, other: &Self) -> Self {
        self.check_dims(other);
        match (self, other) {
            (AbstractElement::Bottom { .. }, x) => x.clone(),
            (x, AbstractElement::Bottom { .. }) => x.clone(),
            (AbstractElement::Matrix(a), AbstractElement::Matrix(b)) => {
                let dim = a.dim();
                let mut out = Dbm::new_top(dim);
                for i in 0..dim {
                    for j in 0..dim {
                        if b.get(i, j) <= a.get(i, j) {
                            out.set(i, j, a.get(i, j).clone());
                        }
                    }
                }
                AbstractElement::Matrix(out)
            }
        }
    }

    /// Narrowing: refine only entries the left argument left at `+inf`.
    pub fn narrow(&self, other: &Self) -> Self {
        self.check_dims(other);
        match (self, other) {
            (AbstractElement::Bottom { dim }, _) | (_, AbstractElement::Bottom { dim }) => {
                AbstractElement::Bottom { dim: *dim }
            }
            (AbstractElement::Matrix(a), AbstractElement::Matrix(b)) => {
                let dim = a.dim();
                let mut out = Dbm::new_top(dim);
                for i in 0..dim {
                    for j in 0..dim {
                        let v = match a.get(i, j) {
                            Bound::PlusInfinity => b.get(i, j).clone(),
                            finite => finite.clone(),
                        };
                        out.set(i, j, v);
                    }
                }
                AbstractElement::Matrix(out)
            }
        }
    }

    /// Erases every constraint on `v_k` while keeping the relations it
    /// implied between the other variables (paths of length two through
    /// `k`). On non-empty arguments this is exactly projection followed by
    /// extrusion along `v_k`.
    ///
    /// # Panics
    /// Panics when `k` is zero or out of range.
    pub fn forget(&self, k: usize) -> Result<Self, OverflowError> {
        assert!(
            k >= 1 && k < self.dim(),
            "cannot forget the zero variable or an out-of-range index"
        );
        let AbstractElement::Matrix(m) = self else {
            return Ok(self.clone());
        };
        let dim = m.dim();
        let mut out = Dbm::new_top(dim);
        for i in 0..dim {
            if i == k {
                continue;
            }
            for j in 0..dim {
                if j == k {
                    continue;
                }
                let through = m.get(i, k).add(m.get(k, j))?;
                out.set(i, j, m.get(i, j).clone().min(through));
            }
        }
        out.set(k, k, Bound::zero());
        Ok(AbstractElement::Matrix(out))
    }

    /// Guard transfer function: tightens the entries named by the atom.
    /// Exact for every representable atom; `Unsupported` returns the
    /// argument unchanged, which is the sound fallback.
    ///
    /// # Panics
    /// Panics when a `Diff` atom has `i == j` or indices are out of range.
    pub fn guard(&self, g: &GuardAtom<C>) -> Result<Self, OverflowError> {
        let AbstractElement::Matrix(m) = self else {
            return Ok(self.clone());
        };
        let dim = m.dim();
        let check = |v: usize| assert!(v < dim, "guard variable out of range");
        let mut out = m.clone();
        match g {
            GuardAtom::Unsupported => {}
            GuardAtom::Diff { j, i, c } => {
                assert_ne!(i, j, "difference guard needs distinct variables");
                check(*i);
                check(*j);
                out.tighten(*i, *j, c.clone());
            }
            GuardAtom::Upper { j, c } => {
                check(*j);
                out.tighten(ZERO_VAR, *j, c.clone());
            }
            GuardAtom::Lower { i, c } => {
                check(*i);
                out.tighten(*i, ZERO_VAR, c.clone());
            }
            GuardAtom::EqDiff { j, i, c } => {
                assert_ne!(i, j, "difference guard needs distinct variables");
                check(*i);
                check(*j);
                out.tighten(*i, *j, c.clone());
                out.tighten(*j, *i, c.checked_neg().ok_or(OverflowError)?);
            }
            GuardAtom::EqVar { j, c } => {
                check(*j);
                out.tighten(ZERO_VAR, *j, c.clone());
                out.tighten(*j, ZERO_VAR, c.checked_neg().ok_or(OverflowError)?);
            }
        }
        Ok(AbstractElement::Matrix(out))
    }

    /// Applies a whole condition tree: conjunction is sequential guard
    /// application, disjunction joins the per-branch results.
    pub fn guard_cond(&self, cond: &CondNf<C>) -> Result<Self, OverflowError> {
        match cond {
            CondNf::True => Ok(self.clone()),
            CondNf::False => Ok(AbstractElement::Bottom { dim: self.dim() }),
            CondNf::Atom(g) => self.guard(g),
            CondNf::And(a, b) => self.guard_cond(a)?.guard_cond(b),
            CondNf::Or(a, b) => self.guard_cond(a)?.join(&self.guard_cond(b)?),
        }
    }

    /// Assignment transfer function `v_k <- e`.
    ///
    /// Exact cases: `v_k + c` is an entry shift on row and column `k`;
    /// `v_j + c` and constants go through forget plus two guards. Everything
    /// else evaluates `e` with interval arithmetic over the projections and
    /// keeps only the resulting bounds on `v_k`.
    ///
    /// # Panics
    /// Panics when `k` is zero or out of range.
    pub fn assign(&self, k: usize, e: &Expr) -> Result<Self, OverflowError> {
        assert!(
            k >= 1 && k < self.dim(),
            "cannot assign the zero variable or an out-of-range index"
        );
        let AbstractElement::Matrix(m) = self else {
            return Ok(self.clone());
        };
        match linear_form(e).and_then(|lf| lf.into_coeff::<C>()) {
            Some(SimpleAssign::Shift { var, offset }) if var == k => {
                let dim = m.dim();
                let neg = offset.checked_neg().ok_or(OverflowError)?;
                let mut out = m.clone();
                for j in 0..dim {
                    if j != k {
                        out.set(k, j, m.get(k, j).add(&Bound::Finite(neg.clone()))?);
                        out.set(j, k, m.get(j, k).add(&Bound::Finite(offset.clone()))?);
                    }
                }
                Ok(AbstractElement::Matrix(out))
            }
            Some(SimpleAssign::Shift { var: j, offset }) => {
                // v_k <- v_j + c with j != k: forget then bound both sides.
                let forgotten = self.forget(k)?;
                let neg = offset.checked_neg().ok_or(OverflowError)?;
                forgotten
                    .guard(&GuardAtom::Diff { j: k, i: j, c: offset })?
                    .guard(&GuardAtom::Diff { j, i: k, c: neg })
            }
            Some(SimpleAssign::Const(c)) => {
                let forgotten = self.forget(k)?;
                forgotten.guard(&GuardAtom::EqVar { j: k, c })
            }
            None => {
                // General case: interval evaluation over the projections.
                let Some(closed) = m.close()? else {
                    return Ok(AbstractElement::Bottom { dim: self.dim() });
                };
                let itv = boxdom::eval_with(e, &|v| closed.project(v));
                let forgotten = self.forget(k)?;
                let AbstractElement::Matrix(mut out) = forgotten else {
                    unreachable!("forget of a matrix is a matrix");
                };
                match itv {
                    Interval::Empty => {
                        return Ok(AbstractElement::Bottom { dim: self.dim() })
                    }
                    Interval::Range { lo, hi } => {
                        out.set(ZERO_VAR, k, hi);
                        let low = match lo {
                            LowerBound::MinusInfinity => Bound::PlusInfinity,
                            LowerBound::Finite(c) => {
                                Bound::Finite(c.checked_neg().ok_or(OverflowError)?)
                            }
                        };
                        out.set(k, ZERO_VAR, low);
                    }
                }
                Ok(AbstractElement::Matrix(out))
            }
        }
    }

    /// Closure with emptiness normalized to bottom; stays in the
    /// un-normalized lattice type for the engine's use.
    pub fn normalized(&self) -> Result<Self, OverflowError> {
        match self.closed_part()? {
            None => Ok(AbstractElement::Bottom { dim: self.dim() }),
            Some(c) => Ok(AbstractElement::Matrix(c.into_dbm())),
        }
    }

    /// Normal form as an element of the closed lattice.
    pub fn normalize(&self) -> Result<NormalizedElement<C>, OverflowError> {
        match self.closed_part()? {
            None => Ok(NormalizedElement::Bottom { dim: self.dim() }),
            Some(c) => Ok(NormalizedElement::Closed(c)),
        }
    }

    /// Semantic inclusion of solution sets.
    pub fn includes_in(&self, other: &Self) -> Result<bool, OverflowError> {
        self.check_dims(other);
        match (self, other) {
            (AbstractElement::Bottom { .. }, _) => Ok(true),
            (AbstractElement::Matrix(m), AbstractElement::Bottom { .. }) => m.is_empty(),
            (AbstractElement::Matrix(a), AbstractElement::Matrix(b)) => a.includes(b),
        }
    }

    pub fn sem_equal(&self, other: &Self) -> Result<bool, OverflowError> {
        Ok(self.includes_in(other)? && other.includes_in(self)?)
    }

    pub fn project(&self, k: usize) -> Result<Interval<C>, OverflowError> {
        match self {
            AbstractElement::Bottom { .. } => Ok(Interval::Empty),
            AbstractElement::Matrix(m) => m.project(k),
        }
    }
}

/// Element of the normalized lattice: bottom or a closed matrix with a
/// non-empty solution set. Representation is unique per solution set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalizedElement<C> {
    Bottom { dim: usize },
    Closed(ClosedDbm<C>),
}

impl<C: Coefficient> NormalizedElement<C> {
    pub fn dim(&self) -> usize {
        match self {
            NormalizedElement::Bottom { dim } => *dim,
            NormalizedElement::Closed(c) => c.dim(),
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, NormalizedElement::Bottom { .. })
    }

    pub fn as_closed(&self) -> Option<&ClosedDbm<C>> {
        match self {
            NormalizedElement::Bottom { .. } => None,
            NormalizedElement::Closed(c) => Some(c),
        }
    }

    pub fn to_element(&self) -> AbstractElement<C> {
        match self {
            NormalizedElement::Bottom { dim } => AbstractElement::Bottom { dim: *dim },
            NormalizedElement::Closed(c) => AbstractElement::Matrix(c.as_dbm().clone()),
        }
    }

    pub fn project(&self, k: usize) -> Interval<C> {
        match self {
            NormalizedElement::Bottom { .. } => Interval::Empty,
            NormalizedElement::Closed(c) => c.project(k),
        }
    }
}

/// Abstraction of a finite point set: the least normalized element whose
/// solution set contains every point. Entry `(i, j)` is the maximum of
/// `x_j - x_i` over the points (with `x_0 = 0`), which yields a closed
/// matrix directly.
///
/// # Panics
/// Panics when point vectors disagree on length (`dim - 1` values each).
pub fn alpha_points<C: Coefficient>(
    dim: usize,
    points: &[Vec<C>],
) -> Result<NormalizedElement<C>, OverflowError> {
    assert!(dim >= 1);
    if points.is_empty() {
        return Ok(NormalizedElement::Bottom { dim });
    }
    for p in points {
        assert_eq!(p.len(), dim - 1, "inconsistent point vector length");
    }
    let coord = |p: &Vec<C>, i: usize| -> C {
        if i == ZERO_VAR {
            C::zero()
        } else {
            p[i - 1].clone()
        }
    };
    let mut m = Dbm::new_top(dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut best: Option<C> = None;
            for p in points {
                let d = coord(p, j)
                    .checked_sub(&coord(p, i))
                    .ok_or(OverflowError)?;
                best = Some(match best {
                    None => d,
                    Some(b) => b.max(d),
                });
            }
            m.set(i, j, Bound::Finite(best.expect("non-empty point set")));
        }
    }
    Ok(NormalizedElement::Closed(ClosedDbm::assume_closed(m)))
}

enum SimpleAssign<C> {
    Const(C),
    Shift { var: usize, offset: C },
}

struct LinearForm {
    coeffs: std::collections::BTreeMap<usize, i128>,
    constant: i128,
}

impl LinearForm {
    fn into_coeff<C: Coefficient>(self) -> Option<SimpleAssign<C>> {
        let nonzero: Vec<(usize, i128)> = self
            .coeffs
            .into_iter()
            .filter(|(_, a)| *a != 0)
            .collect();
        match nonzero.as_slice() {
            [] => Some(SimpleAssign::Const(C::from_i128(self.constant)?)),
            [(v, 1)] => Some(SimpleAssign::Shift {
                var: *v,
                offset: C::from_i128(self.constant)?,
            }),
            _ => None,
        }
    }
}

/// Rewrites an expression as `sum(a_i * v_i) + c` when it is linear with
/// coefficients that fit; `None` routes the assignment to the interval case.
fn linear_form(e: &Expr) -> Option<LinearForm> {
    use std::collections::BTreeMap;
    fn go(e: &Expr) -> Option<LinearForm> {
        match e {
            Expr::Const(c) => Some(LinearForm {
                coeffs: BTreeMap::new(),
                constant: *c as i128,
            }),
            Expr::Var(v) => {
                let mut coeffs = BTreeMap::new();
                coeffs.insert(*v, 1i128);
                Some(LinearForm { coeffs, constant: 0 })
            }
            Expr::Neg(x) => {
                let mut lf = go(x)?;
                for a in lf.coeffs.values_mut() {
                    *a = a.checked_neg()?;
                }
                lf.constant = lf.constant.checked_neg()?;
                Some(lf)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let la = go(a)?;
                let mut lb = go(b)?;
                let sub = matches!(e, Expr::Sub(_, _));
                if sub {
                    for v in lb.coeffs.values_mut() {
                        *v = v.checked_neg()?;
                    }
                    lb.constant = lb.constant.checked_neg()?;
                }
                let mut coeffs = la.coeffs;
                for (v, a) in lb.coeffs {
                    let slot = coeffs.entry(v).or_insert(0);
                    *slot = slot.checked_add(a)?;
                }
                Some(LinearForm {
                    coeffs,
                    constant: la.constant.checked_add(lb.constant)?,
                })
            }
            Expr::Mul(a, b) => {
                let la = go(a)?;
                let lb = go(b)?;
                let scale = |lf: LinearForm, s: i128| -> Option<LinearForm> {
                    let mut coeffs = lf.coeffs;
                    for v in coeffs.values_mut() {
                        *v = v.checked_mul(s)?;
                    }
                    Some(LinearForm {
                        coeffs,
                        constant: lf.constant.checked_mul(s)?,
                    })
                };
                if la.coeffs.is_empty() {
                    scale(lb, la.constant)
                } else if lb.coeffs.is_empty() {
                    scale(la, lb.constant)
                } else {
                    None
                }
            }
        }
    }
    go(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = AbstractElement<i64>;

    fn diff(j: usize, i: usize, c: i64) -> GuardAtom<i64> {
        GuardAtom::Diff { j, i, c }
    }

    fn singleton(dim: usize, values: &[i64]) -> E {
        alpha_points(dim, &[values.to_vec()]).unwrap().to_element()
    }

    #[test]
    fn meet_has_top_identity_and_bottom_absorption() {
        let m = singleton(3, &[1, 2]);
        assert_eq!(m.meet(&E::top(3)), m);
        assert!(m.meet(&E::bottom(3)).is_bottom());
    }

    #[test]
    fn meet_can_produce_a_hidden_empty_matrix() {
        // {v1 <= 4} meet {v1 <= 3, v1 >= 5} denotes the empty set.
        let a = E::top(2).guard(&GuardAtom::Upper { j: 1, c: 4 }).unwrap();
        let b = E::top(2)
            .guard(&GuardAtom::Upper { j: 1, c: 3 })
            .unwrap()
            .guard(&GuardAtom::Lower { i: 1, c: -5 })
            .unwrap();
        let met = a.meet(&b);
        assert!(!met.is_bottom(), "meet stays in the un-normalized lattice");
        assert!(met.is_empty().unwrap());
    }

    #[test]
    fn join_is_neutral_on_bottom_and_idempotent_up_to_closure() {
        let m = E::top(3).guard(&diff(1, 2, 1)).unwrap();
        let joined = m.join(&E::bottom(3)).unwrap();
        assert!(joined.sem_equal(&m).unwrap());
        let twice = m.join(&m).unwrap();
        assert_eq!(twice, m.normalized().unwrap());
    }

    #[test]
    fn join_of_two_singletons_matches_the_point_abstraction() {
        // {y1=0, y2=0} join {y1=1, y2=0}: y1 in [0,1], y2 = 0, y1-y2 in [0,1].
        let a = singleton(3, &[0, 0]);
        let b = singleton(3, &[1, 0]);
        let joined = a.join(&b).unwrap();
        let expected = alpha_points(3, &[vec![0, 0], vec![1, 0]])
            .unwrap()
            .to_element();
        assert_eq!(joined, expected);
        assert_eq!(joined.project(1).unwrap(), Interval::bounded(0, 1));
        assert_eq!(joined.project(2).unwrap(), Interval::bounded(0, 0));
    }

    #[test]
    fn widen_definition_cases() {
        let mk = |c01: i64| {
            let mut m = Dbm::new_top(2);
            m.set(0, 1, Bound::Finite(c01));
            E::Matrix(m)
        };
        let a = mk(5);
        assert_eq!(a.widen(&a), a);
        // Entry stable: kept. Entry grew: dropped to +inf.
        assert_eq!(a.widen(&mk(3)), a);
        let widened = a.widen(&mk(7));
        let E::Matrix(w) = &widened else { panic!() };
        assert_eq!(*w.get(0, 1), Bound::PlusInfinity);
        // Bottom is neutral on both sides.
        assert_eq!(E::bottom(2).widen(&a), a);
        assert_eq!(a.widen(&E::bottom(2)), a);
    }

    #[test]
    fn narrow_definition_cases() {
        let m = singleton(3, &[1, 2]);
        let normalized = m.normalized().unwrap();
        assert_eq!(E::top(3).narrow(&normalized), normalized);
        assert_eq!(m.narrow(&m), m);

        let mut a = Dbm::new_top(2);
        a.set(1, 0, Bound::Finite(3));
        let mut b = Dbm::new_top(2);
        b.set(0, 1, Bound::Finite(7));
        b.set(1, 0, Bound::Finite(2));
        let narrowed = E::Matrix(a).narrow(&E::Matrix(b));
        let E::Matrix(n) = &narrowed else { panic!() };
        assert_eq!(*n.get(0, 1), Bound::Finite(7));
        assert_eq!(*n.get(1, 0), Bound::Finite(3));
        // Bottom absorbs in both positions.
        assert!(E::bottom(2).narrow(&narrowed).is_bottom());
        assert!(narrowed.narrow(&E::bottom(2)).is_bottom());
    }

    #[test]
    fn forget_erases_one_variable_and_keeps_the_rest() {
        // v1 in [1,4], v2 in [1,3], v1 - v2 <= 1; forgetting v2 keeps v1 in [1,4].
        let m = Dbm::from_constraints(
            3,
            &[(0, 1, 4), (1, 0, -1), (0, 2, 3), (2, 0, -1), (2, 1, 1)],
        );
        let e = E::Matrix(m);
        let f = e.forget(2).unwrap();
        assert_eq!(f.project(1).unwrap(), Interval::bounded(1, 4));
        assert_eq!(f.project(2).unwrap(), Interval::full());
        // Idempotent.
        assert_eq!(f.forget(2).unwrap(), f);
        // Top is a fixpoint.
        let t = E::top(3);
        assert!(t.forget(1).unwrap().sem_equal(&t).unwrap());
    }

    #[test]
    fn guard_examples() {
        // v2 - v3 <= 1 on top touches exactly entry (2, 1): indices 1 and 2
        // are the first and second program variables.
        let g = E::top(3).guard(&diff(1, 2, 1)).unwrap();
        let E::Matrix(m) = &g else { panic!() };
        assert_eq!(*m.get(2, 1), Bound::Finite(1));
        let finite: usize = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|(i, j)| m.get(*i, *j).is_finite())
            .count();
        assert_eq!(finite, 1);

        // Unsupported leaves the argument unchanged.
        let a = singleton(3, &[1, 2]);
        assert_eq!(a.guard(&GuardAtom::Unsupported).unwrap(), a);

        // v1 = 3 on v1 in [0,5] pins the interval.
        let e = E::top(2).guard(&GuardAtom::Upper { j: 1, c: 5 }).unwrap();
        let e = e.guard(&GuardAtom::Lower { i: 1, c: 0 }).unwrap();
        let pinned = e.guard(&GuardAtom::EqVar { j: 1, c: 3 }).unwrap();
        assert_eq!(pinned.project(1).unwrap(), Interval::bounded(3, 3));
    }

    #[test]
    fn assign_shift_by_zero_is_identity() {
        let a = singleton(3, &[1, 2]);
        let shifted = a
            .assign(1, &Expr::Add(Box::new(Expr::Var(1)), Box::new(Expr::Const(0))))
            .unwrap();
        assert_eq!(shifted, a);
    }

    #[test]
    fn assign_var_plus_one_is_exact() {
        // From {y2 = 0}: y1 <- y2 + 1 gives y1 = 1, y2 = 0, y1 - y2 = 1.
        let start = E::top(3).guard(&GuardAtom::EqVar { j: 2, c: 0 }).unwrap();
        let out = start
            .assign(1, &Expr::Add(Box::new(Expr::Var(2)), Box::new(Expr::Const(1))))
            .unwrap();
        let expected = singleton(3, &[1, 0]);
        assert!(out.sem_equal(&expected).unwrap());
    }

    #[test]
    fn assign_product_goes_through_interval_arithmetic() {
        // v1 in [1,2], v2 in [3,4]; v3 <- v1 * v2 lands in [3,8] and the
        // relations between v3 and the operands are forgotten.
        let e = E::top(4)
            .guard(&GuardAtom::Upper { j: 1, c: 2 })
            .unwrap()
            .guard(&GuardAtom::Lower { i: 1, c: -1 })
            .unwrap()
            .guard(&GuardAtom::Upper { j: 2, c: 4 })
            .unwrap()
            .guard(&GuardAtom::Lower { i: 2, c: -3 })
            .unwrap();
        let out = e
            .assign(3, &Expr::Mul(Box::new(Expr::Var(1)), Box::new(Expr::Var(2))))
            .unwrap();
        assert_eq!(out.project(3).unwrap(), Interval::bounded(3, 8));
        let E::Matrix(m) = &out else { panic!() };
        assert_eq!(*m.get(1, 3), Bound::PlusInfinity);
        assert_eq!(*m.get(3, 1), Bound::PlusInfinity);
    }

    #[test]
    fn alpha_points_edge_cases() {
        assert!(alpha_points::<i64>(3, &[]).unwrap().is_bottom());
        let z = alpha_points(3, &[vec![0, 0]]).unwrap();
        let c = z.as_closed().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(*c.get(i, j), Bound::Finite(0));
            }
        }
    }

    #[test]
    fn guard_cond_compounds() {
        let top = E::top(3);
        // (v1 <= 2) and (v2 <= 3)
        let both = top
            .guard_cond(&CondNf::And(
                Box::new(CondNf::Atom(GuardAtom::Upper { j: 1, c: 2 })),
                Box::new(CondNf::Atom(GuardAtom::Upper { j: 2, c: 3 })),
            ))
            .unwrap();
        let E::Matrix(m) = &both else { panic!() };
        assert_eq!(*m.get(0, 1), Bound::Finite(2));
        assert_eq!(*m.get(0, 2), Bound::Finite(3));
        // False yields bottom, True is the identity.
        assert!(top.guard_cond(&CondNf::False).unwrap().is_bottom());
        assert_eq!(top.guard_cond(&CondNf::True).unwrap(), top);
    }
}
