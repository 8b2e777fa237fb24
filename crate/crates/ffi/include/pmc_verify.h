#ifndef PMC_VERIFY_H
#define PMC_VERIFY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PmcDiffVar {
  PMC_DIFF_VAR_ALPHA = 0,
  PMC_DIFF_VAR_A = 1,
  PMC_DIFF_VAR_ABAR = 2,
} PmcDiffVar;

typedef enum PmcStatus {
  PMC_STATUS_OK = 0,
  PMC_STATUS_NULL_ARGUMENT = 1,
  PMC_STATUS_INVALID_UTF8 = 2,
  PMC_STATUS_SYNTAX = 3,
  PMC_STATUS_UNKNOWN_ID = 4,
  PMC_STATUS_POLE = 5,
  PMC_STATUS_OVERFLOW = 6,
  PMC_STATUS_DOMAIN = 7,
  PMC_STATUS_CONFIG = 8,
  PMC_STATUS_BUFFER_TOO_SMALL = 9,
  PMC_STATUS_PANIC = 10,
  PMC_STATUS_INTERNAL = 11,
} PmcStatus;

/**
 * The 34 catalog entries, built once.
 */
typedef struct PmcCatalog PmcCatalog;

/**
 * An element of the quotient ring's fraction field.
 */
typedef struct PmcExpr PmcExpr;

/**
 * The outcome of a suite run.
 */
typedef struct PmcReport PmcReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the calling thread's last error message into `buf`.
 *
 * # Safety
 * `buf` must point to `len` writable bytes or be null; `needed` may be null.
 */
enum PmcStatus pmc_last_error(char *buf, size_t len, size_t *needed);

/**
 * Parse an expression in the input syntax.
 *
 * # Safety
 * `text_in` must be a NUL-terminated string; `out_expr` must be writable.
 */
enum PmcStatus pmc_expr_parse(const char *text_in, struct PmcExpr **out_expr);

/**
 * Release an expression; null is ignored.
 *
 * # Safety
 * `e` must come from this library and not be used afterwards.
 */
void pmc_expr_free(struct PmcExpr *e);

/**
 * Render in the input syntax.
 *
 * # Safety
 * `e` must be a live handle; `buf` must point to `len` writable bytes or be null.
 */
enum PmcStatus pmc_expr_render(const struct PmcExpr *e, char *buf, size_t len, size_t *needed);

/**
 * Derivative with respect to α, a or ā (Wirtinger).
 *
 * # Safety
 * `e` must be a live handle; `out_expr` must be writable.
 */
enum PmcStatus pmc_expr_diff(const struct PmcExpr *e,
                             enum PmcDiffVar wrt,
                             struct PmcExpr **out_expr);

/**
 * Exact equality in the quotient ring.
 *
 * # Safety
 * `x`, `y` must be live handles; `result` must be writable.
 */
enum PmcStatus pmc_expr_equals(const struct PmcExpr *x, const struct PmcExpr *y, bool *result);

/**
 * Evaluate at `k=v,...` (alpha=pi/4|pi/3|radians or t=rational; a, rho, b) in floating point.
 *
 * # Safety
 * `e` must be a live handle; `at` NUL-terminated; `re`, `im` writable.
 */
enum PmcStatus pmc_expr_eval(const struct PmcExpr *e,
                             const char *at,
                             uint32_t precision,
                             double *re,
                             double *im);

/**
 * Build the catalog.
 *
 * # Safety
 * `out_cat` must be writable.
 */
enum PmcStatus pmc_catalog_new(struct PmcCatalog **out_cat);

/**
 * Release a catalog; null is ignored.
 *
 * # Safety
 * `c` must come from this library and not be used afterwards.
 */
void pmc_catalog_free(struct PmcCatalog *c);

/**
 * A copy of entry `id` (kappa, p1..p22, F).
 *
 * # Safety
 * `c` must be a live handle; `id` NUL-terminated; `out_expr` writable.
 */
enum PmcStatus pmc_catalog_get(const struct PmcCatalog *c,
                               const char *id,
                               struct PmcExpr **out_expr);

/**
 * Run a suite ("static", "jet", "numeric", "all") in "symbolic" or "sampled" mode.
 *
 * # Safety
 * `suite`, `mode` NUL-terminated; `out_report` writable.
 */
enum PmcStatus pmc_verify_run(const char *suite,
                              const char *mode,
                              size_t samples,
                              uint64_t seed,
                              struct PmcReport **out_report);

/**
 * The report as JSON.
 *
 * # Safety
 * `r` must be a live handle; `buf` must point to `len` writable bytes or be null.
 */
enum PmcStatus pmc_report_json(const struct PmcReport *r, char *buf, size_t len, size_t *needed);

/**
 * 0 all pass, 1 any Fail, 3 overflow without fallback; -1 for a null handle.
 *
 * # Safety
 * `r` must be a live handle or null.
 */
int32_t pmc_report_exit_code(const struct PmcReport *r);

/**
 * Release a report; null is ignored.
 *
 * # Safety
 * `r` must come from this library and not be used afterwards.
 */
void pmc_report_free(struct PmcReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PMC_VERIFY_H */
