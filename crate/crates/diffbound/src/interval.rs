//! One-dimensional intervals with infinite endpoints.
//!
//! Projections of a DBM and the components of the baseline box domain are
//! both values of this type. A distinguished `Empty` value exists; non-empty
//! intervals keep `lo <= hi`.

use std::fmt;

use crate::bound::{Bound, Coefficient};

/// A lower endpoint: `-inf` or a finite coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LowerBound<C> {
    MinusInfinity,
    Finite(C),
}

impl<C: Ord> PartialOrd for LowerBound<C> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<C: Ord> Ord for LowerBound<C> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use LowerBound::*;
        match (self, other) {
            (MinusInfinity, MinusInfinity) => std::cmp::Ordering::Equal,
            (MinusInfinity, Finite(_)) => std::cmp::Ordering::Less,
            (Finite(_), MinusInfinity) => std::cmp::Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl<C: Coefficient> LowerBound<C> {
    pub fn as_finite(&self) -> Option<&C> {
        match self {
            LowerBound::Finite(c) => Some(c),
            LowerBound::MinusInfinity => None,
        }
    }
}

/// An interval over the coefficient set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Interval<C> {
    Empty,
    Range { lo: LowerBound<C>, hi: Bound<C> },
}

/// Extended value used internally for endpoint arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Ext<C> {
    NegInf,
    Fin(C),
    PosInf,
}

impl<C: Coefficient> Ext<C> {
    fn add(&self, rhs: &Self) -> Option<Ext<C>> {
        use Ext::*;
        match (self, rhs) {
            (NegInf, PosInf) | (PosInf, NegInf) => unreachable!("inf - inf is never formed"),
            (NegInf, _) | (_, NegInf) => Some(NegInf),
            (PosInf, _) | (_, PosInf) => Some(PosInf),
            (Fin(a), Fin(b)) => a.checked_add(b).map(Fin),
        }
    }

    /// Multiplication with the `0 * inf = 0` convention used for endpoint
    /// candidates of closed intervals.
    fn mul(&self, rhs: &Self) -> Option<Ext<C>> {
        use Ext::*;
        let zero = C::zero();
        let sign = |e: &Ext<C>| -> i8 {
            match e {
                NegInf => -1,
                PosInf => 1,
                Fin(c) => match c.cmp(&zero) {
                    std::cmp::Ordering::Less => -1,
                    std::cmp::Ordering::Equal => 0,
                    std::cmp::Ordering::Greater => 1,
                },
            }
        };
        match (self, rhs) {
            (Fin(a), Fin(b)) => a.checked_mul(b).map(Fin),
            (a, b) => {
                let s = sign(a) * sign(b);
                Some(match s {
                    0 => Fin(zero),
                    1 => PosInf,
                    _ => NegInf,
                })
            }
        }
    }
}

impl<C: Coefficient> Interval<C> {
    /// The interval containing every value.
    pub fn full() -> Self {
        Interval::Range {
            lo: LowerBound::MinusInfinity,
            hi: Bound::PlusInfinity,
        }
    }

    pub fn singleton(c: C) -> Self {
        Interval::Range {
            lo: LowerBound::Finite(c.clone()),
            hi: Bound::Finite(c),
        }
    }

    /// Builds an interval, collapsing to `Empty` when `lo > hi`.
    pub fn range(lo: LowerBound<C>, hi: Bound<C>) -> Self {
        if let (LowerBound::Finite(a), Bound::Finite(b)) = (&lo, &hi) {
            if a > b {
                return Interval::Empty;
            }
        }
        Interval::Range { lo, hi }
    }

    pub fn bounded(lo: i64, hi: i64) -> Self {
        Interval::range(
            LowerBound::Finite(C::from_int(lo)),
            Bound::Finite(C::from_int(hi)),
        )
    }

    pub fn at_most(hi: C) -> Self {
        Interval::Range {
            lo: LowerBound::MinusInfinity,
            hi: Bound::Finite(hi),
        }
    }

    pub fn at_least(lo: C) -> Self {
        Interval::Range {
            lo: LowerBound::Finite(lo),
            hi: Bound::PlusInfinity,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Interval::Empty)
    }

    pub fn contains(&self, v: &C) -> bool {
        match self {
            Interval::Empty => false,
            Interval::Range { lo, hi } => {
                let above = match lo {
                    LowerBound::MinusInfinity => true,
                    LowerBound::Finite(a) => a <= v,
                };
                let below = match hi {
                    Bound::PlusInfinity => true,
                    Bound::Finite(b) => v <= b,
                };
                above && below
            }
        }
    }

    /// `other` is contained in `self`.
    pub fn contains_interval(&self, other: &Self) -> bool {
        match (other, self) {
            (Interval::Empty, _) => true,
            (_, Interval::Empty) => false,
            (
                Interval::Range { lo: lo2, hi: hi2 },
                Interval::Range { lo: lo1, hi: hi1 },
            ) => lo1 <= lo2 && hi2 <= hi1,
        }
    }

    pub fn meet(&self, other: &Self) -> Self {
        match (self, other) {
            (Interval::Empty, _) | (_, Interval::Empty) => Interval::Empty,
            (
                Interval::Range { lo: a, hi: b },
                Interval::Range { lo: c, hi: d },
            ) => Interval::range(a.clone().max(c.clone()), b.clone().min(d.clone())),
        }
    }

    pub fn join(&self, other: &Self) -> Self {
        match (self, other) {
            (Interval::Empty, x) | (x, Interval::Empty) => x.clone(),
            (
                Interval::Range { lo: a, hi: b },
                Interval::Range { lo: c, hi: d },
            ) => Interval::Range {
                lo: a.clone().min(c.clone()),
                hi: b.clone().max(d.clone()),
            },
        }
    }

    /// Interval widening: a bound that grew becomes infinite.
    ///
    /// # Panics
    /// Panics on empty arguments.
    pub fn widen(&self, other: &Self) -> Self {
        let (Interval::Range { lo: a, hi: b }, Interval::Range { lo: c, hi: d }) =
            (self, other)
        else {
            panic!("interval widening requires non-empty arguments");
        };
        let lo = if a <= c {
            a.clone()
        } else {
            LowerBound::MinusInfinity
        };
        let hi = if b >= d { b.clone() } else { Bound::PlusInfinity };
        Interval::Range { lo, hi }
    }

    /// Interval narrowing: only infinite bounds are refined.
    pub fn narrow(&self, other: &Self) -> Self {
        let (Interval::Range { lo: a, hi: b }, Interval::Range { lo: c, hi: d }) =
            (self, other)
        else {
            panic!("interval narrowing requires non-empty arguments");
        };
        let lo = match a {
            LowerBound::MinusInfinity => c.clone(),
            _ => a.clone(),
        };
        let hi = match b {
            Bound::PlusInfinity => d.clone(),
            _ => b.clone(),
        };
        Interval::Range { lo, hi }
    }

    fn ends(&self) -> Option<(Ext<C>, Ext<C>)> {
        match self {
            Interval::Empty => None,
            Interval::Range { lo, hi } => {
                let l = match lo {
                    LowerBound::MinusInfinity => Ext::NegInf,
                    LowerBound::Finite(c) => Ext::Fin(c.clone()),
                };
                let h = match hi {
                    Bound::PlusInfinity => Ext::PosInf,
                    Bound::Finite(c) => Ext::Fin(c.clone()),
                };
                Some((l, h))
            }
        }
    }

    fn from_ends(lo: Ext<C>, hi: Ext<C>) -> Self {
        let l = match lo {
            Ext::NegInf => LowerBound::MinusInfinity,
            Ext::Fin(c) => LowerBound::Finite(c),
            Ext::PosInf => unreachable!("lower endpoint cannot be +inf"),
        };
        let h = match hi {
            Ext::PosInf => Bound::PlusInfinity,
            Ext::Fin(c) => Bound::Finite(c),
            Ext::NegInf => unreachable!("upper endpoint cannot be -inf"),
        };
        Interval::Range { lo: l, hi: h }
    }

    /// Endpoint addition; an overflowing endpoint widens to infinity.
    pub fn add(&self, other: &Self) -> Self {
        let (Some((al, ah)), Some((bl, bh))) = (self.ends(), other.ends()) else {
            return Interval::Empty;
        };
        let lo = al.add(&bl).unwrap_or(Ext::NegInf);
        let hi = ah.add(&bh).unwrap_or(Ext::PosInf);
        Interval::from_ends(lo, hi)
    }

    pub fn neg(&self) -> Self {
        let Some((lo, hi)) = self.ends() else {
            return Interval::Empty;
        };
        let neg = |e: Ext<C>| -> Option<Ext<C>> {
            match e {
                Ext::NegInf => Some(Ext::PosInf),
                Ext::PosInf => Some(Ext::NegInf),
                Ext::Fin(c) => c.checked_neg().map(Ext::Fin),
            }
        };
        match (neg(hi), neg(lo)) {
            (Some(l), Some(h)) => Interval::from_ends(l, h),
            // i64::MIN negation overflow: widen the affected side.
            _ => Interval::full(),
        }
    }

    /// Endpoint products; any overflow widens the result to the full range.
    pub fn mul(&self, other: &Self) -> Self {
        let (Some((al, ah)), Some((bl, bh))) = (self.ends(), other.ends()) else {
            return Interval::Empty;
        };
        let mut lo: Option<Ext<C>> = None;
        let mut hi: Option<Ext<C>> = None;
        for x in [&al, &ah] {
            for y in [&bl, &bh] {
                let Some(p) = x.mul(y) else {
                    return Interval::full();
                };
                let lt = |a: &Ext<C>, b: &Ext<C>| -> bool {
                    match (a, b) {
                        (Ext::NegInf, Ext::NegInf) | (Ext::PosInf, Ext::PosInf) => false,
                        (Ext::NegInf, _) | (_, Ext::PosInf) => true,
                        (_, Ext::NegInf) | (Ext::PosInf, _) => false,
                        (Ext::Fin(a), Ext::Fin(b)) => a < b,
                    }
                };
                if lo.as_ref().is_none_or(|m| lt(&p, m)) {
                    lo = Some(p.clone());
                }
                if hi.as_ref().is_none_or(|m| lt(m, &p)) {
                    hi = Some(p);
                }
            }
        }
        Interval::from_ends(lo.unwrap(), hi.unwrap())
    }
}

impl<C: Coefficient> fmt::Display for Interval<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Empty => write!(f, "empty"),
            Interval::Range { lo, hi } => {
                match lo {
                    LowerBound::MinusInfinity => write!(f, "(-inf, ")?,
                    LowerBound::Finite(c) => write!(f, "[{}, ", c.render())?,
                }
                match hi {
                    Bound::PlusInfinity => write!(f, "+inf)"),
                    Bound::Finite(c) => write!(f, "{}]", c.render()),
                }
            }
        }
    }
}
