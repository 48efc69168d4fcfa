/* C interface to the diffbound difference-bound-matrix analyzer. */

#pragma once

/* Generated with cbindgen:0.26.0 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Abstract domain selector for source analysis.
typedef enum DbmDomainKind {
  DbmDomainKind_Dbm = 0,
  DbmDomainKind_Interval = 1,
} DbmDomainKind;

// Status code returned by every interface function.
typedef enum DbmStatus {
  DbmStatus_Ok = 0,
  DbmStatus_NullArgument = 1,
  DbmStatus_InvalidDimension = 2,
  DbmStatus_IndexOutOfRange = 3,
  DbmStatus_DimensionMismatch = 4,
  DbmStatus_Overflow = 5,
  DbmStatus_ParseError = 6,
  DbmStatus_InvalidUtf8 = 7,
  DbmStatus_InvalidArgument = 8,
} DbmStatus;

// Opaque abstract element over 64-bit integer coefficients.
typedef struct DbmAbstract DbmAbstract;

// Projection of one variable: a possibly empty, possibly half-open
// interval. Bounds are meaningful only when the corresponding flag is set.
typedef struct DbmIntervalResult {
  bool is_empty;
  bool has_lower;
  int64_t lower;
  bool has_upper;
  int64_t upper;
} DbmIntervalResult;

// Options for [`dbm_analyze_source`]; mirror the analyzer defaults with
// `{ DbmDomainKind::Dbm, 1, 2, false }`.
typedef struct DbmAnalyzeOptions {
  enum DbmDomainKind domain;
  uint32_t widening_delay;
  uint32_t descending_steps;
  bool use_rationals;
} DbmAnalyzeOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates the unconstrained element of the given dimension (index 0 is the
// constant-zero variable, so `dim` must be at least 1).
//
// # Safety
// `out` must be a valid pointer; the returned handle must be released with
// [`dbm_abstract_free`].
enum DbmStatus dbm_abstract_top(size_t dim, struct DbmAbstract **out);

// Creates the bottom element of the given dimension.
//
// # Safety
// As for [`dbm_abstract_top`].
enum DbmStatus dbm_abstract_bottom(size_t dim, struct DbmAbstract **out);

// Releases a handle; a null pointer is ignored.
//
// # Safety
// `h` must have been returned by this interface and not freed before.
void dbm_abstract_free(struct DbmAbstract *h);

// # Safety
// `h` must be a live handle, `out` a valid pointer.
enum DbmStatus dbm_abstract_clone(const struct DbmAbstract *h, struct DbmAbstract **out);

// # Safety
// `h` must be a live handle, `out` a valid pointer.
enum DbmStatus dbm_abstract_dim(const struct DbmAbstract *h, size_t *out);

// Tightens the potential constraint `v_j - v_i <= c` in place; a bottom
// element stays bottom.
//
// # Safety
// `h` must be a live, uniquely owned handle.
enum DbmStatus dbm_abstract_add_constraint(struct DbmAbstract *h, size_t i, size_t j, int64_t c);

// Writes whether the element's solution set is empty.
//
// # Safety
// `h` must be a live handle, `out` a valid pointer.
enum DbmStatus dbm_abstract_is_empty(const struct DbmAbstract *h, bool *out);

// Closure with emptiness normalized to bottom, as a new handle.
//
// # Safety
// `h` must be a live handle, `out` a valid pointer.
enum DbmStatus dbm_abstract_normalize(const struct DbmAbstract *h, struct DbmAbstract **out);

// Writes whether the first solution set is contained in the second.
//
// # Safety
// `a` and `b` must be live handles of equal dimension, `out` valid.
enum DbmStatus dbm_abstract_includes(const struct DbmAbstract *a,
                                     const struct DbmAbstract *b,
                                     bool *out);

// Writes whether the two elements denote the same solution set.
//
// # Safety
// `a` and `b` must be live handles of equal dimension, `out` valid.
enum DbmStatus dbm_abstract_sem_equal(const struct DbmAbstract *a,
                                      const struct DbmAbstract *b,
                                      bool *out);

// Point-wise meet (exact intersection).
//
// # Safety
// `a` and `b` must be live handles of equal dimension, `out` valid.
enum DbmStatus dbm_abstract_meet(const struct DbmAbstract *a,
                                 const struct DbmAbstract *b,
                                 struct DbmAbstract **out);

// Least upper bound of the solution sets (closes both arguments).
//
// # Safety
// `a` and `b` must be live handles of equal dimension, `out` valid.
enum DbmStatus dbm_abstract_join(const struct DbmAbstract *a,
                                 const struct DbmAbstract *b,
                                 struct DbmAbstract **out);

// Widening. Pass a normalized right argument for precision, and do not
// re-close the returned accumulator between iterations: that breaks the
// termination guarantee.
//
// # Safety
// `a` and `b` must be live handles of equal dimension, `out` valid.
enum DbmStatus dbm_abstract_widen(const struct DbmAbstract *a,
                                  const struct DbmAbstract *b,
                                  struct DbmAbstract **out);

// Narrowing: refines only unbounded entries of the first argument.
//
// # Safety
// `a` and `b` must be live handles of equal dimension, `out` valid.
enum DbmStatus dbm_abstract_narrow(const struct DbmAbstract *a,
                                   const struct DbmAbstract *b,
                                   struct DbmAbstract **out);

// Erases every constraint on variable `k` (`1 <= k < dim`).
//
// # Safety
// `h` must be a live handle, `out` valid.
enum DbmStatus dbm_abstract_forget(const struct DbmAbstract *h, size_t k, struct DbmAbstract **out);

// Guard transfer for the test `v_j - v_i <= c`.
//
// # Safety
// `h` must be a live handle, `out` valid.
enum DbmStatus dbm_abstract_guard_le(const struct DbmAbstract *h,
                                     size_t j,
                                     size_t i,
                                     int64_t c,
                                     struct DbmAbstract **out);

// Guard transfer for the test `v_j - v_i = c`.
//
// # Safety
// `h` must be a live handle, `out` valid.
enum DbmStatus dbm_abstract_guard_eq(const struct DbmAbstract *h,
                                     size_t j,
                                     size_t i,
                                     int64_t c,
                                     struct DbmAbstract **out);

// Assignment transfer `v_k <- c`.
//
// # Safety
// `h` must be a live handle, `out` valid.
enum DbmStatus dbm_abstract_assign_const(const struct DbmAbstract *h,
                                         size_t k,
                                         int64_t c,
                                         struct DbmAbstract **out);

// Assignment transfer `v_k <- v_j + c` (exact; `j` may equal `k`).
//
// # Safety
// `h` must be a live handle, `out` valid.
enum DbmStatus dbm_abstract_assign_var_offset(const struct DbmAbstract *h,
                                              size_t k,
                                              size_t j,
                                              int64_t c,
                                              struct DbmAbstract **out);

// Projects variable `k` onto its interval of possible values.
//
// # Safety
// `h` must be a live handle, `out` valid.
enum DbmStatus dbm_abstract_project(const struct DbmAbstract *h,
                                    size_t k,
                                    struct DbmIntervalResult *out);

// Renders the normalized constraint lines of the element, one per line,
// with default variable names `v1..v{dim-1}`. The returned string must be
// released with [`dbm_string_free`].
//
// # Safety
// `h` must be a live handle, `out` valid.
enum DbmStatus dbm_abstract_render(const struct DbmAbstract *h, char **out);

// Releases a string allocated by this interface; null is ignored.
//
// # Safety
// `s` must come from this interface and not have been freed.
void dbm_string_free(char *s);

// Parses and analyzes a whole program, returning the report as a JSON
// string (released with [`dbm_string_free`]). `opts` may be null for the
// defaults. `all_proved`, when non-null, receives whether every assert in
// the program was proved.
//
// # Safety
// `source` must be a valid NUL-terminated string; out-pointers valid.
enum DbmStatus dbm_analyze_source(const char *source,
                                  const struct DbmAnalyzeOptions *opts,
                                  char **json_out,
                                  bool *all_proved);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus
