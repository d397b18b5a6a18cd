#ifndef VISLAT_H
#define VISLAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum {
  VISLAT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  VISLAT_STATUS_NULL_POINTER = 1,
  VISLAT_STATUS_INVALID_ARGUMENT = 2,
  /**
   * `d` is not squarefree, or is 1.
   */
  VISLAT_STATUS_INVALID_FIELD = 3,
  /**
   * Operation undefined for this field (e.g. splitting over the rationals).
   */
  VISLAT_STATUS_UNSUPPORTED = 4,
  VISLAT_STATUS_OUT_OF_RANGE = 5,
  VISLAT_STATUS_CAPACITY_EXCEEDED = 6,
  /**
   * A numeric routine missed its tolerance or node budget.
   */
  VISLAT_STATUS_NUMERIC_FAILURE = 7,
  /**
   * Main term requires m*s >= 2.
   */
  VISLAT_STATUS_UNDEFINED_MAIN_TERM = 8,
  VISLAT_STATUS_IDENTITY_VIOLATION = 9,
  VISLAT_STATUS_FIT_REFUSED = 10,
  /**
   * A panic was caught at the boundary; the handle state is still valid.
   */
  VISLAT_STATUS_INTERNAL_PANIC = 11,
} VislatStatus;

/**
 * Opaque field handle.
 */
typedef struct VislatField VislatField;

/**
 * Opaque pair of coefficient and Moebius tables for one field.
 */
typedef struct VislatTables VislatTables;

/**
 * Field invariants (plain data mirror of the internal field description).
 */
typedef struct {
  int64_t d;
  int64_t disc;
  uint32_t degree;
  uint32_t r1;
  uint32_t r2;
  uint32_t w;
  double residue_c;
} VislatFieldInfo;

/**
 * Result of a Perron kernel quadrature or j-reconstruction.
 */
typedef struct {
  double x;
  double t_height;
  double estimate;
  double estimate_im;
  double reference;
  double abs_error;
  uint64_t nodes;
} VislatPerronResult;

/**
 * Log-log exponent fit summary.
 */
typedef struct {
  double slope;
  double intercept;
  double r_squared;
  uint32_t n_points;
  uint32_t dropped_zeros;
} VislatExponentFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a field handle for squarefree `d` (0 selects the rational field).
 *
 * # Safety
 * `out` must be a valid pointer; on `OK` it receives a handle that must be
 * released with [`vislat_field_free`].
 */
VislatStatus vislat_field_new(int64_t d, VislatField **out);

/**
 * Release a field handle. Null is ignored.
 *
 * # Safety
 * `field` must be null or a handle from [`vislat_field_new`], not yet freed.
 */
void vislat_field_free(VislatField *field);

/**
 * Copy the field invariants into `out`.
 *
 * # Safety
 * `field` must be a live handle; `out` must be valid for writes.
 */
VislatStatus vislat_field_info(const VislatField *field, VislatFieldInfo *out);

/**
 * Residue of the field zeta function at s = 1, to within `tol`.
 *
 * # Safety
 * `field` must be a live handle; `out` must be valid for writes.
 */
VislatStatus vislat_residue_c(const VislatField *field, double tol, double *out);

/**
 * `zeta_K(m)` for real `m > 1`, with its rigorous tail bound.
 *
 * # Safety
 * `field` must be a live handle; `value` and `tail_bound` must be valid for
 * writes.
 */
VislatStatus vislat_zeta_k(const VislatField *field,
                           double m,
                           double tol,
                           double *value,
                           double *tail_bound);

/**
 * Build the coefficient and Moebius tables up to `limit`.
 *
 * # Safety
 * `field` must be a live handle; `out` receives a handle to release with
 * [`vislat_tables_free`].
 */
VislatStatus vislat_tables_build(const VislatField *field, uint64_t limit, VislatTables **out);

/**
 * Release a tables handle. Null is ignored.
 *
 * # Safety
 * `tables` must be null or a handle from [`vislat_tables_build`].
 */
void vislat_tables_free(VislatTables *tables);

/**
 * The table limit X.
 *
 * # Safety
 * `tables` must be a live handle; `out` must be valid for writes.
 */
VislatStatus vislat_tables_limit(const VislatTables *tables, uint64_t *out);

/**
 * Number of ideals of norm exactly `n`.
 *
 * # Safety
 * `tables` must be a live handle; `out` must be valid for writes.
 */
VislatStatus vislat_coefficient_at(const VislatTables *tables, uint64_t n, uint32_t *out);

/**
 * Norm-aggregated Moebius coefficient `b[n]`.
 *
 * # Safety
 * `tables` must be a live handle; `out` must be valid for writes.
 */
VislatStatus vislat_moebius_at(const VislatTables *tables, uint64_t n, int32_t *out);

/**
 * Number of ideals of norm at most `x` (the step function j_K).
 *
 * # Safety
 * `tables` must be a live handle; `out` must be valid for writes.
 */
VislatStatus vislat_ideal_count(const VislatTables *tables, double x, uint64_t *out);

/**
 * Exact count of visible ordered m-tuples with norms at most `x`, as a
 * decimal string (release with [`vislat_string_free`]).
 *
 * # Safety
 * `tables` must be a live handle; `out` must be valid for writes.
 */
VislatStatus vislat_visible_count(const VislatTables *tables, uint32_t m, double x, char **out);

/**
 * Exact count of relatively s-prime ordered m-tuples, as a decimal string.
 *
 * # Safety
 * `tables` must be a live handle; `out` must be valid for writes.
 */
VislatStatus vislat_sprime_count(const VislatTables *tables,
                                 uint32_t m,
                                 uint32_t s,
                                 double x,
                                 char **out);

/**
 * Error term `V_m^s(x) - (cx)^m / zeta_K(ms)`; requires `m*s >= 2`.
 *
 * # Safety
 * `tables` must be a live handle; `out` must be valid for writes.
 */
VislatStatus vislat_error_term(const VislatTables *tables,
                               uint32_t m,
                               uint32_t s,
                               double x,
                               double *out);

/**
 * Release a string returned by a counting call. Null is ignored.
 *
 * # Safety
 * `s` must be null or a pointer previously returned by this library.
 */
void vislat_string_free(char *s);

/**
 * Number of integer points inside the circle of radius-squared `r`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
VislatStatus vislat_circle_count(double r, uint64_t *out);

/**
 * Truncated Perron kernel quadrature at `x` with contour height `t_height`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
VislatStatus vislat_kernel_quadrature(double x,
                                      double t_height,
                                      uint64_t node_budget,
                                      VislatPerronResult *out);

/**
 * Reconstruct j_K at the half-integer `x` from term-wise kernel sums.
 *
 * # Safety
 * `field` must be a live handle; `out` must be valid for writes.
 */
VislatStatus vislat_perron_reconstruction(const VislatField *field,
                                          double x,
                                          double t_height,
                                          uint64_t node_budget,
                                          VislatPerronResult *out);

/**
 * Ordinary least squares slope of `log |v|` against `log x` over parallel
 * arrays of length `len`.
 *
 * # Safety
 * `xs` and `vs` must point to `len` readable doubles; `out` must be valid
 * for writes.
 */
VislatStatus vislat_fit_exponent(const double *xs,
                                 const double *vs,
                                 size_t len,
                                 VislatExponentFit *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VISLAT_H */
