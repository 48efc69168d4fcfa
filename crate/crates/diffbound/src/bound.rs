//! Extended coefficients and matrix entries.
//!
//! DBM entries live in the coefficient set extended with `+inf`. Addition is
//! total (`+inf` absorbs) and `<=`/`min`/`max` form a total order with `+inf`
//! as the maximum. With fixed-width coefficients every overflow is detected
//! and reported, never wrapped.

use std::fmt;

use num::{BigInt, One, Signed, Zero};

/// Checked coefficient arithmetic overflowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("arithmetic overflow on bound coefficients")]
pub struct OverflowError;

/// Coefficient set for DBM entries: exact signed integers or exact rationals.
pub trait Coefficient: Clone + Ord + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn from_int(v: i64) -> Self;
    /// Conversion for constants folded by the frontend; `None` when the value
    /// does not fit the coefficient type.
    fn from_i128(v: i128) -> Option<Self>;
    fn checked_add(&self, rhs: &Self) -> Option<Self>;
    fn checked_sub(&self, rhs: &Self) -> Option<Self>;
    fn checked_neg(&self) -> Option<Self>;
    fn checked_mul(&self, rhs: &Self) -> Option<Self>;
    /// Greatest value strictly below `self` when the coefficient set is
    /// discrete; `None` for dense sets, where strict bounds degrade to
    /// non-strict ones.
    fn predecessor(&self) -> Option<Self>;
    fn render(&self) -> String;
}

impl Coefficient for i64 {
    fn zero() -> Self {
        0
    }

    fn from_int(v: i64) -> Self {
        v
    }

    fn from_i128(v: i128) -> Option<Self> {
        i64::try_from(v).ok()
    }

    fn checked_add(&self, rhs: &Self) -> Option<Self> {
        i64::checked_add(*self, *rhs)
    }

    fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        i64::checked_sub(*self, *rhs)
    }

    fn checked_neg(&self) -> Option<Self> {
        i64::checked_neg(*self)
    }

    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        i64::checked_mul(*self, *rhs)
    }

    fn predecessor(&self) -> Option<Self> {
        self.checked_sub(&1)
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

/// Exact rational coefficients; arithmetic never overflows.
pub type Rational = num::BigRational;

impl Coefficient for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }

    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_i128(v: i128) -> Option<Self> {
        Some(Rational::from_integer(BigInt::from(v)))
    }

    fn checked_add(&self, rhs: &Self) -> Option<Self> {
        Some(self + rhs)
    }

    fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        Some(self - rhs)
    }

    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }

    fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        Some(self * rhs)
    }

    fn predecessor(&self) -> Option<Self> {
        None
    }

    fn render(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else if self.denom().is_negative() {
            // Ratio keeps the denominator positive, but stay defensive.
            format!("{}/{}", -self.numer(), -self.denom())
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// A DBM entry: a finite coefficient or `+inf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound<C> {
    Finite(C),
    PlusInfinity,
}

impl<C: Ord> PartialOrd for Bound<C> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<C: Ord> Ord for Bound<C> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Bound::*;
        match (self, other) {
            (PlusInfinity, PlusInfinity) => std::cmp::Ordering::Equal,
            (PlusInfinity, Finite(_)) => std::cmp::Ordering::Greater,
            (Finite(_), PlusInfinity) => std::cmp::Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl<C: Coefficient> Bound<C> {
    pub fn zero() -> Self {
        Bound::Finite(C::zero())
    }

    pub fn finite(c: i64) -> Self {
        Bound::Finite(C::from_int(c))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Bound::Finite(_))
    }

    /// Total addition; `+inf` absorbs. `inf - inf` never arises because the
    /// entry set has no `-inf`.
    pub fn add(&self, rhs: &Self) -> Result<Self, OverflowError> {
        match (self, rhs) {
            (Bound::Finite(a), Bound::Finite(b)) => {
                a.checked_add(b).map(Bound::Finite).ok_or(OverflowError)
            }
            _ => Ok(Bound::PlusInfinity),
        }
    }

    pub fn as_finite(&self) -> Option<&C> {
        match self {
            Bound::Finite(c) => Some(c),
            Bound::PlusInfinity => None,
        }
    }
}

impl<C: Coefficient> fmt::Display for Bound<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(c) => write!(f, "{}", c.render()),
            Bound::PlusInfinity => write!(f, "inf"),
        }
    }
}
