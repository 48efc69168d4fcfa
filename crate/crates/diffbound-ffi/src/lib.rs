//! C interface to the difference-bound domain and analyzer.
//!
//! Abstract elements are opaque handles created and freed here; every
//! function returns a status code and writes results through out-pointers.
//! Coefficients are 64-bit integers with checked arithmetic; the
//! source-level analyzer can also run in exact rational mode through
//! [`dbm_analyze_source`]. The header is generated into `include/` at build
//! time.
//!
//! Index 0 is the constant-zero variable: a constraint `v_j - v_i <= c`
//! with `i = 0` is the upper bound `v_j <= c` and with `j = 0` the lower
//! bound `-v_i <= c`.

use std::ffi::{c_char, CStr, CString};

use diffbound::cli::{analyze_source, SourceError};
use diffbound::engine::{AnalysisOptions, CoeffMode, DomainKind};
use diffbound::render::dbm_constraint_lines;
use diffbound::{AbstractElement, Bound, GuardAtom, Interval, LowerBound, OverflowError};

/// Opaque abstract element over 64-bit integer coefficients.
pub struct DbmAbstract {
    inner: AbstractElement<i64>,
}

/// Status code returned by every interface function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DbmStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidDimension = 2,
    IndexOutOfRange = 3,
    DimensionMismatch = 4,
    Overflow = 5,
    ParseError = 6,
    InvalidUtf8 = 7,
    InvalidArgument = 8,
}

/// Abstract domain selector for source analysis.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DbmDomainKind {
    Dbm = 0,
    Interval = 1,
}

/// Options for [`dbm_analyze_source`]; mirror the analyzer defaults with
/// `{ DbmDomainKind::Dbm, 1, 2, false }`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DbmAnalyzeOptions {
    pub domain: DbmDomainKind,
    pub widening_delay: u32,
    pub descending_steps: u32,
    pub use_rationals: bool,
}

/// Projection of one variable: a possibly empty, possibly half-open
/// interval. Bounds are meaningful only when the corresponding flag is set.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DbmIntervalResult {
    pub is_empty: bool,
    pub has_lower: bool,
    pub lower: i64,
    pub has_upper: bool,
    pub upper: i64,
}

fn overflow_status(_: OverflowError) -> DbmStatus {
    DbmStatus::Overflow
}

unsafe fn write_handle(out: *mut *mut DbmAbstract, value: AbstractElement<i64>) -> DbmStatus {
    if out.is_null() {
        return DbmStatus::NullArgument;
    }
    *out = Box::into_raw(Box::new(DbmAbstract { inner: value }));
    DbmStatus::Ok
}

macro_rules! deref {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(h) => &h.inner,
            None => return DbmStatus::NullArgument,
        }
    };
}

/// Creates the unconstrained element of the given dimension (index 0 is the
/// constant-zero variable, so `dim` must be at least 1).
///
/// # Safety
/// `out` must be a valid pointer; the returned handle must be released with
/// [`dbm_abstract_free`].
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_top(
    dim: usize,
    out: *mut *mut DbmAbstract,
) -> DbmStatus {
    if dim == 0 {
        return DbmStatus::InvalidDimension;
    }
    write_handle(out, AbstractElement::top(dim))
}

/// Creates the bottom element of the given dimension.
///
/// # Safety
/// As for [`dbm_abstract_top`].
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_bottom(
    dim: usize,
    out: *mut *mut DbmAbstract,
) -> DbmStatus {
    if dim == 0 {
        return DbmStatus::InvalidDimension;
    }
    write_handle(out, AbstractElement::bottom(dim))
}

/// Releases a handle; a null pointer is ignored.
///
/// # Safety
/// `h` must have been returned by this interface and not freed before.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_free(h: *mut DbmAbstract) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_clone(
    h: *const DbmAbstract,
    out: *mut *mut DbmAbstract,
) -> DbmStatus {
    let v = deref!(h);
    write_handle(out, v.clone())
}

/// # Safety
/// `h` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_dim(h: *const DbmAbstract, out: *mut usize) -> DbmStatus {
    let v = deref!(h);
    if out.is_null() {
        return DbmStatus::NullArgument;
    }
    *out = v.dim();
    DbmStatus::Ok
}

/// Tightens the potential constraint `v_j - v_i <= c` in place; a bottom
/// element stays bottom.
///
/// # Safety
/// `h` must be a live, uniquely owned handle.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_add_constraint(
    h: *mut DbmAbstract,
    i: usize,
    j: usize,
    c: i64,
) -> DbmStatus {
    let Some(handle) = h.as_mut() else {
        return DbmStatus::NullArgument;
    };
    let dim = handle.inner.dim();
    if i >= dim || j >= dim {
        return DbmStatus::IndexOutOfRange;
    }
    if let AbstractElement::Matrix(m) = &mut handle.inner {
        m.tighten(i, j, c);
    }
    DbmStatus::Ok
}

/// Writes whether the element's solution set is empty.
///
/// # Safety
/// `h` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_is_empty(
    h: *const DbmAbstract,
    out: *mut bool,
) -> DbmStatus {
    let v = deref!(h);
    if out.is_null() {
        return DbmStatus::NullArgument;
    }
    match v.is_empty() {
        Ok(b) => {
            *out = b;
            DbmStatus::Ok
        }
        Err(e) => overflow_status(e),
    }
}

/// Closure with emptiness normalized to bottom, as a new handle.
///
/// # Safety
/// `h` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_normalize(
    h: *const DbmAbstract,
    out: *mut *mut DbmAbstract,
) -> DbmStatus {
    let v = deref!(h);
    match v.normalized() {
        Ok(n) => write_handle(out, n),
        Err(e) => overflow_status(e),
    }
}

/// Writes whether the first solution set is contained in the second.
///
/// # Safety
/// `a` and `b` must be live handles of equal dimension, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_includes(
    a: *const DbmAbstract,
    b: *const DbmAbstract,
    out: *mut bool,
) -> DbmStatus {
    let (va, vb) = (deref!(a), deref!(b));
    if va.dim() != vb.dim() {
        return DbmStatus::DimensionMismatch;
    }
    if out.is_null() {
        return DbmStatus::NullArgument;
    }
    match va.includes_in(vb) {
        Ok(r) => {
            *out = r;
            DbmStatus::Ok
        }
        Err(e) => overflow_status(e),
    }
}

/// Writes whether the two elements denote the same solution set.
///
/// # Safety
/// `a` and `b` must be live handles of equal dimension, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_sem_equal(
    a: *const DbmAbstract,
    b: *const DbmAbstract,
    out: *mut bool,
) -> DbmStatus {
    let (va, vb) = (deref!(a), deref!(b));
    if va.dim() != vb.dim() {
        return DbmStatus::DimensionMismatch;
    }
    if out.is_null() {
        return DbmStatus::NullArgument;
    }
    match va.sem_equal(vb) {
        Ok(r) => {
            *out = r;
            DbmStatus::Ok
        }
        Err(e) => overflow_status(e),
    }
}

/// Point-wise meet (exact intersection).
///
/// # Safety
/// `a` and `b` must be live handles of equal dimension, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_meet(
    a: *const DbmAbstract,
    b: *const DbmAbstract,
    out: *mut *mut DbmAbstract,
) -> DbmStatus {
    let (va, vb) = (deref!(a), deref!(b));
    if va.dim() != vb.dim() {
        return DbmStatus::DimensionMismatch;
    }
    write_handle(out, va.meet(vb))
}

/// Least upper bound of the solution sets (closes both arguments).
///
/// # Safety
/// `a` and `b` must be live handles of equal dimension, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_join(
    a: *const DbmAbstract,
    b: *const DbmAbstract,
    out: *mut *mut DbmAbstract,
) -> DbmStatus {
    let (va, vb) = (deref!(a), deref!(b));
    if va.dim() != vb.dim() {
        return DbmStatus::DimensionMismatch;
    }
    match va.join(vb) {
        Ok(r) => write_handle(out, r),
        Err(e) => overflow_status(e),
    }
}

/// Widening. Pass a normalized right argument for precision, and do not
/// re-close the returned accumulator between iterations: that breaks the
/// termination guarantee.
///
/// # Safety
/// `a` and `b` must be live handles of equal dimension, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_widen(
    a: *const DbmAbstract,
    b: *const DbmAbstract,
    out: *mut *mut DbmAbstract,
) -> DbmStatus {
    let (va, vb) = (deref!(a), deref!(b));
    if va.dim() != vb.dim() {
        return DbmStatus::DimensionMismatch;
    }
    write_handle(out, va.widen(vb))
}

/// Narrowing: refines only unbounded entries of the first argument.
///
/// # Safety
/// `a` and `b` must be live handles of equal dimension, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_narrow(
    a: *const DbmAbstract,
    b: *const DbmAbstract,
    out: *mut *mut DbmAbstract,
) -> DbmStatus {
    let (va, vb) = (deref!(a), deref!(b));
    if va.dim() != vb.dim() {
        return DbmStatus::DimensionMismatch;
    }
    write_handle(out, va.narrow(vb))
}

/// Erases every constraint on variable `k` (`1 <= k < dim`).
///
/// # Safety
/// `h` must be a live handle, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_forget(
    h: *const DbmAbstract,
    k: usize,
    out: *mut *mut DbmAbstract,
) -> DbmStatus {
    let v = deref!(h);
    if k == 0 || k >= v.dim() {
        return DbmStatus::IndexOutOfRange;
    }
    match v.forget(k) {
        Ok(r) => write_handle(out, r),
        Err(e) => overflow_status(e),
    }
}

fn guard_atom(
    dim: usize,
    j: usize,
    i: usize,
    c: i64,
    equality: bool,
) -> Result<GuardAtom<i64>, DbmStatus> {
    if i >= dim || j >= dim {
        return Err(DbmStatus::IndexOutOfRange);
    }
    if i == j {
        return Err(DbmStatus::InvalidArgument);
    }
    Ok(match (equality, i, j) {
        (false, 0, j) => GuardAtom::Upper { j, c },
        (false, i, 0) => GuardAtom::Lower { i, c },
        (false, i, j) => GuardAtom::Diff { j, i, c },
        (true, 0, j) => GuardAtom::EqVar { j, c },
        (true, i, 0) => {
            let neg = c.checked_neg().ok_or(DbmStatus::Overflow)?;
            GuardAtom::EqVar { j: i, c: neg }
        }
        (true, i, j) => GuardAtom::EqDiff { j, i, c },
    })
}

/// Guard transfer for the test `v_j - v_i <= c`.
///
/// # Safety
/// `h` must be a live handle, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_guard_le(
    h: *const DbmAbstract,
    j: usize,
    i: usize,
    c: i64,
    out: *mut *mut DbmAbstract,
) -> DbmStatus {
    let v = deref!(h);
    let atom = match guard_atom(v.dim(), j, i, c, false) {
        Ok(a) => a,
        Err(s) => return s,
    };
    match v.guard(&atom) {
        Ok(r) => write_handle(out, r),
        Err(e) => overflow_status(e),
    }
}

/// Guard transfer for the test `v_j - v_i = c`.
///
/// # Safety
/// `h` must be a live handle, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_guard_eq(
    h: *const DbmAbstract,
    j: usize,
    i: usize,
    c: i64,
    out: *mut *mut DbmAbstract,
) -> DbmStatus {
    let v = deref!(h);
    let atom = match guard_atom(v.dim(), j, i, c, true) {
        Ok(a) => a,
        Err(s) => return s,
    };
    match v.guard(&atom) {
        Ok(r) => write_handle(out, r),
        Err(e) => overflow_status(e),
    }
}

/// Assignment transfer `v_k <- c`.
///
/// # Safety
/// `h` must be a live handle, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_assign_const(
    h: *const DbmAbstract,
    k: usize,
    c: i64,
    out: *mut *mut DbmAbstract,
) -> DbmStatus {
    let v = deref!(h);
    if k == 0 || k >= v.dim() {
        return DbmStatus::IndexOutOfRange;
    }
    match v.assign(k, &diffbound::ast::Expr::Const(c)) {
        Ok(r) => write_handle(out, r),
        Err(e) => overflow_status(e),
    }
}

/// Assignment transfer `v_k <- v_j + c` (exact; `j` may equal `k`).
///
/// # Safety
/// `h` must be a live handle, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_assign_var_offset(
    h: *const DbmAbstract,
    k: usize,
    j: usize,
    c: i64,
    out: *mut *mut DbmAbstract,
) -> DbmStatus {
    let v = deref!(h);
    if k == 0 || k >= v.dim() || j == 0 || j >= v.dim() {
        return DbmStatus::IndexOutOfRange;
    }
    let expr = diffbound::ast::Expr::Add(
        Box::new(diffbound::ast::Expr::Var(j)),
        Box::new(diffbound::ast::Expr::Const(c)),
    );
    match v.assign(k, &expr) {
        Ok(r) => write_handle(out, r),
        Err(e) => overflow_status(e),
    }
}

/// Projects variable `k` onto its interval of possible values.
///
/// # Safety
/// `h` must be a live handle, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_project(
    h: *const DbmAbstract,
    k: usize,
    out: *mut DbmIntervalResult,
) -> DbmStatus {
    let v = deref!(h);
    if k == 0 || k >= v.dim() {
        return DbmStatus::IndexOutOfRange;
    }
    if out.is_null() {
        return DbmStatus::NullArgument;
    }
    let itv = match v.project(k) {
        Ok(i) => i,
        Err(e) => return overflow_status(e),
    };
    *out = match itv {
        Interval::Empty => DbmIntervalResult {
            is_empty: true,
            has_lower: false,
            lower: 0,
            has_upper: false,
            upper: 0,
        },
        Interval::Range { lo, hi } => {
            let (has_lower, lower) = match lo {
                LowerBound::MinusInfinity => (false, 0),
                LowerBound::Finite(c) => (true, c),
            };
            let (has_upper, upper) = match hi {
                Bound::PlusInfinity => (false, 0),
                Bound::Finite(c) => (true, c),
            };
            DbmIntervalResult {
                is_empty: false,
                has_lower,
                lower,
                has_upper,
                upper,
            }
        }
    };
    DbmStatus::Ok
}

/// Renders the normalized constraint lines of the element, one per line,
/// with default variable names `v1..v{dim-1}`. The returned string must be
/// released with [`dbm_string_free`].
///
/// # Safety
/// `h` must be a live handle, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn dbm_abstract_render(
    h: *const DbmAbstract,
    out: *mut *mut c_char,
) -> DbmStatus {
    let v = deref!(h);
    if out.is_null() {
        return DbmStatus::NullArgument;
    }
    let normalized = match v.normalize() {
        Ok(n) => n,
        Err(e) => return overflow_status(e),
    };
    let names: Vec<String> = (1..v.dim()).map(|k| format!("v{k}")).collect();
    let text = dbm_constraint_lines(&normalized, &names).join("\n");
    match CString::new(text) {
        Ok(s) => {
            *out = s.into_raw();
            DbmStatus::Ok
        }
        Err(_) => DbmStatus::InvalidArgument,
    }
}

/// Releases a string allocated by this interface; null is ignored.
///
/// # Safety
/// `s` must come from this interface and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn dbm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and analyzes a whole program, returning the report as a JSON
/// string (released with [`dbm_string_free`]). `opts` may be null for the
/// defaults. `all_proved`, when non-null, receives whether every assert in
/// the program was proved.
///
/// # Safety
/// `source` must be a valid NUL-terminated string; out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn dbm_analyze_source(
    source: *const c_char,
    opts: *const DbmAnalyzeOptions,
    json_out: *mut *mut c_char,
    all_proved: *mut bool,
) -> DbmStatus {
    if source.is_null() || json_out.is_null() {
        return DbmStatus::NullArgument;
    }
    let Ok(text) = CStr::from_ptr(source).to_str() else {
        return DbmStatus::InvalidUtf8;
    };
    let options = match opts.as_ref() {
        None => AnalysisOptions::default(),
        Some(o) => AnalysisOptions {
            domain: match o.domain {
                DbmDomainKind::Dbm => DomainKind::Dbm,
                DbmDomainKind::Interval => DomainKind::Interval,
            },
            widening_delay: o.widening_delay as usize,
            descending_steps: o.descending_steps as usize,
            coefficients: if o.use_rationals {
                CoeffMode::Rational
            } else {
                CoeffMode::Integer
            },
        },
    };
    match analyze_source(text, &options, false, false) {
        Ok(analysis) => {
            let json = serde_json::to_string_pretty(&analysis.report)
                .expect("report serializes");
            let Ok(s) = CString::new(json) else {
                return DbmStatus::InvalidArgument;
            };
            *json_out = s.into_raw();
            if !all_proved.is_null() {
                *all_proved = analysis.all_proved;
            }
            DbmStatus::Ok
        }
        Err(SourceError::Parse(_)) | Err(SourceError::UnsupportedInit) => DbmStatus::ParseError,
        Err(SourceError::Overflow(_)) => DbmStatus::Overflow,
    }
}
