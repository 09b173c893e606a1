#ifndef GRADBOUND_H
#define GRADBOUND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum GbStatus {
  GB_STATUS_OK = 0,
  GB_STATUS_NULL_POINTER = 1,
  GB_STATUS_INVALID_ARGUMENT = 2,
  GB_STATUS_UNKNOWN_ORACLE = 3,
  GB_STATUS_DIMENSION_MISMATCH = 4,
  GB_STATUS_MISSING_CAPABILITY = 5,
  /**
   * NaN or infinity, gradient blow-up, rank deficiency, failed fit.
   */
  GB_STATUS_NUMERIC = 6,
  GB_STATUS_OUT_OF_RANGE = 7,
  GB_STATUS_BUFFER_TOO_SMALL = 8,
  GB_STATUS_PANIC = 9,
} GbStatus;

/**
 * Solver family; `restart_interval` in [`GbSolverConfig`] is read only for
 * `RestartFixed`.
 */
typedef enum GbVariant {
  GB_VARIANT_GRADIENT_DESCENT = 0,
  GB_VARIANT_NESTEROV = 1,
  GB_VARIANT_RESTART_FIXED = 2,
  GB_VARIANT_ADAPTIVE_RESTART = 3,
  GB_VARIANT_ADAPTIVE_SKIP = 4,
} GbVariant;

typedef enum GbTerminalStatus {
  GB_TERMINAL_STATUS_TOL_REACHED = 0,
  GB_TERMINAL_STATUS_MAX_ITERS = 1,
  GB_TERMINAL_STATUS_DIVERGED = 2,
} GbTerminalStatus;

typedef enum GbResetEvent {
  GB_RESET_EVENT_NONE = 0,
  GB_RESET_EVENT_RESTART = 1,
  GB_RESET_EVENT_SKIP = 2,
} GbResetEvent;

/**
 * Opaque objective oracle.
 */
typedef struct GbOracle GbOracle;

/**
 * Opaque solver trace.
 */
typedef struct GbTrace GbTrace;

typedef struct GbSolverConfig {
  enum GbVariant variant;
  size_t restart_interval;
  double stepsize_h;
  size_t max_iters;
  double grad_tol;
} GbSolverConfig;

/**
 * One trace row without the iterate; `dist_to_sol` is NaN when unknown.
 */
typedef struct GbTraceRecord {
  size_t k;
  double f;
  double grad_norm;
  double dist_to_sol;
  enum GbResetEvent reset_event;
} GbTraceRecord;

/**
 * `first_fail_k` is -1 when the bound held everywhere.
 */
typedef struct GbBoundReport {
  bool pass;
  double max_violation;
  int64_t first_fail_k;
  size_t checked;
} GbBoundReport;

typedef struct GbGridOptimum {
  double theta_star;
  double h_star;
  double min_value;
  double case_a_value;
  double case_b_value;
} GbGridOptimum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len - 1` bytes). Returns the full message length in bytes,
 * so a caller can size the buffer with a first call using `len = 0`.
 *
 * # Safety
 * `buf` must be valid for `len` writes when `len > 0`.
 */
size_t gb_last_error_message(char *buf, size_t len);

/**
 * Builds an oracle from a textual id such as `"f2"` or
 * `"quad:m=20,n=50,seed=7"`.
 *
 * # Safety
 * `id` must be a NUL-terminated string; `out` must be writable.
 */
enum GbStatus gb_oracle_from_id(const char *id, struct GbOracle **out);

/**
 * # Safety
 * `oracle` must come from [`gb_oracle_from_id`] and not be freed twice.
 */
void gb_oracle_free(struct GbOracle *oracle);

/**
 * Dimension of the oracle's domain; 0 for a null handle.
 *
 * # Safety
 * `oracle` must be a live handle or null.
 */
size_t gb_oracle_dim(const struct GbOracle *oracle);

/**
 * Evaluates `f(x)` and `∇f(x)`; `x` and `grad` both have length `n`.
 *
 * # Safety
 * `x` must be readable and `grad` writable for `n` doubles; `value` writable.
 */
enum GbStatus gb_oracle_eval(const struct GbOracle *oracle,
                             const double *x,
                             size_t n,
                             double *value,
                             double *grad);

/**
 * Runs one solver from `x0` (length `n`). A diverged run still yields a
 * trace; inspect it with [`gb_trace_status`].
 *
 * # Safety
 * `x0` must be readable for `n` doubles; `config` readable; `out` writable.
 */
enum GbStatus gb_solve(const struct GbOracle *oracle,
                       const double *x0,
                       size_t n,
                       const struct GbSolverConfig *config,
                       struct GbTrace **out);

/**
 * # Safety
 * `trace` must come from [`gb_solve`] and not be freed twice.
 */
void gb_trace_free(struct GbTrace *trace);

/**
 * Number of records (iterates `x^(0) .. x^(k)`); 0 for a null handle.
 *
 * # Safety
 * `trace` must be a live handle or null.
 */
size_t gb_trace_len(const struct GbTrace *trace);

/**
 * # Safety
 * `trace` must be a live handle; `out` writable.
 */
enum GbStatus gb_trace_status(const struct GbTrace *trace, enum GbTerminalStatus *out);

/**
 * # Safety
 * `trace` must be a live handle; `out` writable.
 */
enum GbStatus gb_trace_get(const struct GbTrace *trace, size_t index, struct GbTraceRecord *out);

/**
 * Copies iterate `index` into `buf`, which holds `len` doubles.
 *
 * # Safety
 * `trace` must be a live handle; `buf` writable for `len` doubles.
 */
enum GbStatus gb_trace_iterate(const struct GbTrace *trace, size_t index, double *buf, size_t len);

/**
 * Checks one named bound (e.g. `"thm2_linear"`) along `trace`, which must
 * have been produced on `oracle` with `config`.
 *
 * # Safety
 * All pointers must be live; `theorem` NUL-terminated; `out` writable.
 */
enum GbStatus gb_check_bound(const struct GbTrace *trace,
                             const struct GbOracle *oracle,
                             const char *theorem,
                             const struct GbSolverConfig *config,
                             struct GbBoundReport *out);

/**
 * One step of the momentum recursion: `θ_{k+1}` and `β_{k+1}` from `θ_k`.
 *
 * # Safety
 * `next` and `beta` must be writable.
 */
enum GbStatus gb_theta_step(double theta, double *next, double *beta);

/**
 * Grid minimum of the stepsize contraction factors for given `R` and `ν`.
 *
 * # Safety
 * `out` must be writable.
 */
enum GbStatus gb_appendix_grid(double r, double nu, size_t grid_steps, struct GbGridOptimum *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRADBOUND_H */
