#ifndef GENFRAC_H
#define GENFRAC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Classical family codes reported by `genfrac_reduce`.
typedef enum GenfracKind {
  GENFRAC_KIND_GENERALIZED = 0,
  GENFRAC_KIND_RIEMANN_LIOUVILLE = 1,
  GENFRAC_KIND_HADAMARD = 2,
  GENFRAC_KIND_ERDELYI_KOBER = 3,
  GENFRAC_KIND_KATUGAMPOLA = 4,
  GENFRAC_KIND_WEYL = 5,
  GENFRAC_KIND_LIOUVILLE = 6,
} GenfracKind;

// Status codes.
typedef enum GenfracStatus {
  GENFRAC_STATUS_OK = 0,
  GENFRAC_STATUS_INVALID_ARGUMENT = 1,
  GENFRAC_STATUS_DOMAIN = 2,
  GENFRAC_STATUS_NON_CONVERGENCE = 3,
  GENFRAC_STATUS_PARSE = 4,
  GENFRAC_STATUS_NULL_POINTER = 5,
  GENFRAC_STATUS_PANIC = 6,
} GenfracStatus;

// Parsed test function with its domain.
typedef struct GenfracFunction GenfracFunction;

// Inequality-suite report.
typedef struct GenfracReport GenfracReport;

// Operator parameters. `side` is 0 for left, 1 for right; `upper` is read
// only on the right side and may be `INFINITY`.
typedef struct GenfracParams {
  double alpha;
  double beta;
  double rho;
  double eta;
  double kappa;
  double lower;
  double upper;
  int32_t side;
} GenfracParams;

// Quadrature result.
typedef struct GenfracResult {
  double value;
  double error_estimate;
  uint64_t evaluations;
} GenfracResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until
// the next call on this thread.
const char *genfrac_last_error_message(void);

// Γ(x).
//
// # Safety
// `out` must be a valid pointer to an `f64`.
enum GenfracStatus genfrac_gamma(double x, double *out);

// B(a, b).
//
// # Safety
// `out` must be a valid pointer to an `f64`.
enum GenfracStatus genfrac_beta(double a, double b, double *out);

// Parses a function spec on `[lo, hi]`.
//
// # Safety
// `spec` must be a NUL-terminated string; `out` a valid handle slot.
enum GenfracStatus genfrac_function_parse(const char *spec,
                                          double lo,
                                          double hi,
                                          struct GenfracFunction **out);

// Releases a function handle. Null is a no-op.
//
// # Safety
// `f` must come from `genfrac_function_parse` and not be freed twice.
void genfrac_function_free(struct GenfracFunction *f);

// f(t), failing with `Domain` outside the function's interval.
//
// # Safety
// `f` must be a live handle; `out` a valid pointer.
enum GenfracStatus genfrac_function_eval(const struct GenfracFunction *f, double t, double *out);

// Applies the operator to `f` at `x`. Non-positive tolerances and a zero
// subdivision cap select the defaults. On `NonConvergence` the best
// estimate is still written to `out`.
//
// # Safety
// `params` and `f` must be valid; `out` a valid pointer.
enum GenfracStatus genfrac_evaluate(const struct GenfracParams *params,
                                    const struct GenfracFunction *f,
                                    double x,
                                    double rel_tol,
                                    double abs_tol,
                                    uint32_t max_subdivisions,
                                    struct GenfracResult *out);

// Closed form of the operator applied to t^sigma at x.
//
// # Safety
// `params` must be valid; `out` a valid pointer.
enum GenfracStatus genfrac_closed_form_monomial(const struct GenfracParams *params,
                                                double sigma,
                                                double x,
                                                double *out);

// Classical family the parameters reduce to, compared at tolerance `tol`.
//
// # Safety
// `params` must be valid; `out` a valid pointer.
enum GenfracStatus genfrac_reduce(const struct GenfracParams *params,
                                  double tol,
                                  enum GenfracKind *out);

// Runs the inequality suite on the default operator grid and bands.
// `theorem` is `"all"`, `"8"`..`"15"` or `"T8"`..`"T15"`.
//
// # Safety
// `theorem` must be a NUL-terminated string; `out` a valid handle slot.
enum GenfracStatus genfrac_suite_run(const char *theorem,
                                     uint32_t trials,
                                     uint64_t seed,
                                     struct GenfracReport **out);

// Total failures, inconclusive trials and trials in a report. Any of the
// out-pointers may be null.
//
// # Safety
// `report` must be a live handle.
enum GenfracStatus genfrac_report_counts(const struct GenfracReport *report,
                                         uint64_t *trials,
                                         uint64_t *failures,
                                         uint64_t *inconclusive);

// Report as pretty JSON. Release the string with `genfrac_string_free`.
//
// # Safety
// `report` must be a live handle; `out` a valid pointer slot.
enum GenfracStatus genfrac_report_json(const struct GenfracReport *report, char **out);

// Releases a string returned by this library. Null is a no-op.
//
// # Safety
// `s` must come from this library and not be freed twice.
void genfrac_string_free(char *s);

// Releases a report handle. Null is a no-op.
//
// # Safety
// `report` must come from `genfrac_suite_run` and not be freed twice.
void genfrac_report_free(struct GenfracReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GENFRAC_H */
