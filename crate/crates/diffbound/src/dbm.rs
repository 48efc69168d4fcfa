//! Difference-bound matrices.
//!
//! An `n x n` matrix `m` over bounds encodes the conjunction of potential
//! constraints `v_j - v_i <= m[i][j]`. Index 0 is the constant-zero variable,
//! so `v_k <= c` is entry `(0, k)` and `-v_k <= c` is entry `(k, 0)`. The
//! matrix is also the adjacency matrix of the weighted potential graph, which
//! is where the algorithms below come from:
//!
//! * emptiness is the existence of a strictly negative cycle;
//! * the shortest-path closure is the normal form for non-empty matrices
//!   (the pointwise-least matrix with the same solution set);
//! * semantic inclusion and equality reduce to pointwise comparison of
//!   closures.
//!
//! Values are immutable plain data once built; every operation returns a new
//! matrix.

use std::fmt;

use crate::bound::{Bound, Coefficient, OverflowError};
use crate::interval::{Interval, LowerBound};

/// Index of the constant-zero variable.
pub const ZERO_VAR: usize = 0;

/// A difference-bound matrix. No semantic invariant is imposed: arbitrary
/// entries (including negative diagonals) are representable, and emptiness is
/// a query, not a constructor restriction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dbm<C> {
    dim: usize,
    entries: Vec<Bound<C>>,
}

impl<C: Coefficient> Dbm<C> {
    /// The matrix with every coefficient equal to `+inf`: no constraints.
    ///
    /// # Panics
    /// Panics when `dim` is zero; the constant-zero variable always exists.
    pub fn new_top(dim: usize) -> Self {
        assert!(dim >= 1, "a DBM needs at least the constant-zero variable");
        Dbm {
            dim,
            entries: vec![Bound::PlusInfinity; dim * dim],
        }
    }

    /// Builds a matrix from potential constraints `v_j - v_i <= c`.
    /// Duplicate left members collapse to their minimum bound.
    ///
    /// # Panics
    /// Panics on an out-of-range index.
    pub fn from_constraints(dim: usize, constraints: &[(usize, usize, C)]) -> Self {
        let mut m = Dbm::new_top(dim);
        for (i, j, c) in constraints {
            m.tighten(*i, *j, c.clone());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.dim && j < self.dim);
        i * self.dim + j
    }

    pub fn get(&self, i: usize, j: usize) -> &Bound<C> {
        assert!(i < self.dim && j < self.dim, "entry index out of range");
        &self.entries[self.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, b: Bound<C>) {
        assert!(i < self.dim && j < self.dim, "entry index out of range");
        let k = self.idx(i, j);
        self.entries[k] = b;
    }

    /// Lowers entry `(i, j)` to at most `c`.
    pub fn tighten(&mut self, i: usize, j: usize, c: C) {
        let b = Bound::Finite(c);
        if b < *self.get(i, j) {
            self.set(i, j, b);
        }
    }

    /// Point-wise order: `self[i][j] <= other[i][j]` everywhere.
    ///
    /// # Panics
    /// Panics on dimension mismatch.
    pub fn leq(&self, other: &Self) -> bool {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(other.entries.iter())
            .all(|(a, b)| a <= b)
    }

    /// Shortest-path closure. Returns `None` when the matrix has an empty
    /// solution set (a strictly negative cycle exists), otherwise the unique
    /// normal form: zero diagonal and every entry tightened to the minimal
    /// path weight.
    ///
    /// One Floyd-Warshall pass serves both as the emptiness test (negative
    /// diagonal afterwards) and as the closure computation.
    pub fn close(&self) -> Result<Option<ClosedDbm<C>>, OverflowError> {
        let n = self.dim;
        let mut w = self.clone();
        for k in 0..n {
            for i in 0..n {
                let ik = w.entries[w.idx(i, k)].clone();
                if !ik.is_finite() {
                    continue;
                }
                for j in 0..n {
                    let kj = &w.entries[w.idx(k, j)];
                    if !kj.is_finite() {
                        continue;
                    }
                    let via = ik.add(kj)?;
                    let e = w.idx(i, j);
                    if via < w.entries[e] {
                        w.entries[e] = via;
                    }
                }
            }
        }
        let zero = C::zero();
        for i in 0..n {
            if let Bound::Finite(c) = &w.entries[w.idx(i, i)] {
                if *c < zero {
                    return Ok(None);
                }
            }
        }
        for i in 0..n {
            let e = w.idx(i, i);
            w.entries[e] = Bound::zero();
        }
        Ok(Some(ClosedDbm { m: w }))
    }

    /// Whether the solution set is empty (a strictly negative cycle exists in
    /// the potential graph).
    pub fn is_empty(&self) -> Result<bool, OverflowError> {
        Ok(self.close()?.is_none())
    }

    /// Semantic inclusion of solution sets: `D(self)` is a subset of
    /// `D(other)`.
    pub fn includes(&self, other: &Self) -> Result<bool, OverflowError> {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        match self.close()? {
            None => Ok(true),
            Some(c) => {
                if other.is_empty()? {
                    Ok(false)
                } else {
                    Ok(c.as_dbm().leq(other))
                }
            }
        }
    }

    /// Semantic equality of solution sets: equal closures, or both empty.
    pub fn sem_equal(&self, other: &Self) -> Result<bool, OverflowError> {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        match (self.close()?, other.close()?) {
            (None, None) => Ok(true),
            (Some(a), Some(b)) => Ok(a == b),
            _ => Ok(false),
        }
    }

    /// Interval of values variable `v_k` can take over the solution set:
    /// `[-m*[k][0], m*[0][k]]`, bounds included only when finite. Empty
    /// matrices project to the empty interval.
    ///
    /// # Panics
    /// Panics when `k` is zero or out of range.
    pub fn project(&self, k: usize) -> Result<Interval<C>, OverflowError> {
        assert!(k >= 1 && k < self.dim, "variable index out of range");
        match self.close()? {
            None => Ok(Interval::Empty),
            Some(c) => Ok(c.project(k)),
        }
    }
}

impl<C: Coefficient> fmt::Display for Dbm<C> {
    /// Debug dump: one row per line, entries space-separated, `inf` for
    /// missing constraints.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            if i + 1 < self.dim {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// A matrix in closed normal form: zero diagonal, triangle inequality
/// satisfied, and non-empty solution set. Produced only by [`Dbm::close`]
/// and operations that preserve closedness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedDbm<C> {
    m: Dbm<C>,
}

impl<C: Coefficient> ClosedDbm<C> {
    pub fn as_dbm(&self) -> &Dbm<C> {
        &self.m
    }

    pub fn into_dbm(self) -> Dbm<C> {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Bound<C> {
        self.m.get(i, j)
    }

    /// Projection read directly off the closed form.
    pub fn project(&self, k: usize) -> Interval<C> {
        assert!(k >= 1 && k < self.m.dim, "variable index out of range");
        let lo = match self.m.get(k, ZERO_VAR) {
            Bound::PlusInfinity => LowerBound::MinusInfinity,
            Bound::Finite(c) => LowerBound::Finite(
                c.checked_neg()
                    .expect("closed-form entries negate without overflow"),
            ),
        };
        let hi = self.m.get(ZERO_VAR, k).clone();
        Interval::Range { lo, hi }
    }

    /// Wraps a matrix the caller knows to be closed (zero diagonal and
    /// triangle inequality); checked in debug builds.
    pub(crate) fn assume_closed(m: Dbm<C>) -> Self {
        debug_assert!(matches!(is_closed_form(&m), Ok(true)));
        ClosedDbm { m }
    }
}

/// Checks the closed-form invariants directly: zero diagonal and
/// `m[i][j] <= m[i][k] + m[k][j]` for all triples.
pub fn is_closed_form<C: Coefficient>(m: &Dbm<C>) -> Result<bool, OverflowError> {
    let n = m.dim();
    let zero = Bound::zero();
    for i in 0..n {
        if *m.get(i, i) != zero {
            return Ok(false);
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if *m.get(i, j) > m.get(i, k).add(m.get(k, j))? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
