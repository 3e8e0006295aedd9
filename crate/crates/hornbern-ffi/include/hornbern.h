#ifndef HORNBERN_H
#define HORNBERN_H

/* Generated by cbindgen from the hornbern-ffi crate sources; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible function in this interface.
 */
typedef enum HbStatus {
  /**
   * Success.
   */
  HB_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  HB_ERR_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  HB_ERR_UTF8 = 2,
  /**
   * Malformed input: unparseable number, or a parameter outside the
   * documented limits of this interface.
   */
  HB_ERR_INVALID = 3,
  /**
   * Input outside the mathematical domain of the operation.
   */
  HB_ERR_DOMAIN = 4,
  /**
   * The accuracy target could not be met within internal limits.
   */
  HB_ERR_PRECISION = 5,
  /**
   * A search procedure (bracketing, bisection, scan) failed.
   */
  HB_ERR_SEARCH = 6,
  /**
   * An internal panic was caught at the language boundary.
   */
  HB_ERR_PANIC = 7,
} HbStatus;

/**
 * Opaque evaluator handle fixing the accuracy target (decimal digits of
 * absolute error) for every evaluation made through it.
 */
typedef struct HbEvaluator HbEvaluator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on the calling thread, or
 * NULL when no failure has occurred yet. The pointer stays valid until the
 * next failing call on the same thread; do not free it.
 */
const char *hb_last_error_message(void);

/**
 * Releases a string returned by this interface.
 *
 * # Safety
 * `s` must be a pointer previously returned by one of the
 * string-producing functions here (and not yet freed), or NULL.
 */
void hb_string_free(char *s);

/**
 * Creates an evaluator targeting an absolute error of at most
 * `10^-digits` per evaluation. `digits` must lie in `1..=10000`.
 * Returns NULL (with the error recorded) on a bad argument.
 */
struct HbEvaluator *hb_evaluator_new(uint32_t digits);

/**
 * Releases an evaluator.
 *
 * # Safety
 * `ev` must be a handle from [`hb_evaluator_new`] not yet freed, or NULL.
 */
void hb_evaluator_free(struct HbEvaluator *ev);

/**
 * Accuracy target of the handle, in decimal digits; 0 if `ev` is NULL.
 */
uint32_t hb_evaluator_digits(const struct HbEvaluator *ev);

/**
 * `h_alpha(x) = (1 + 1/x)^(alpha x)` for `x > 0`, rounded to double.
 *
 * # Safety
 * `ev` must be a live handle; `alpha` and `x` must be NUL-terminated
 * strings; `out` must point to a writable double.
 */
enum HbStatus hb_eval_h_f64(const struct HbEvaluator *ev,
                            const char *alpha,
                            const char *x,
                            double *out);

/**
 * `rho(x) = log(1 + 1/x) - 1/(x + 1)` for `x > 0`, rounded to double.
 *
 * # Safety
 * As for [`hb_eval_h_f64`], without `alpha`.
 */
enum HbStatus hb_eval_rho_f64(const struct HbEvaluator *ev, const char *x, double *out);

/**
 * `g(x) = 1 / (x (x+1) [(x+1) log(1 + 1/x) - 1])` for `x > 0`, rounded
 * to double.
 *
 * # Safety
 * As for [`hb_eval_rho_f64`].
 */
enum HbStatus hb_eval_g_f64(const struct HbEvaluator *ev, const char *x, double *out);

/**
 * Stieltjes density `tau0(t)` on `0 < t < 1`, rounded to double.
 *
 * # Safety
 * As for [`hb_eval_rho_f64`] with `t` in place of `x`.
 */
enum HbStatus hb_eval_tau0_f64(const struct HbEvaluator *ev, const char *t, double *out);

/**
 * Series `G_alpha(x) = 2 + sum_{n>=1} x^n/n! (t_n - alpha/(n+1))` for
 * `x >= 0`, rounded to double (may overflow to infinity for large `x`).
 *
 * # Safety
 * As for [`hb_eval_h_f64`].
 */
enum HbStatus hb_eval_big_g_f64(const struct HbEvaluator *ev,
                                const char *alpha,
                                const char *x,
                                double *out);

/**
 * `h_alpha(x)` as a decimal string at the handle's digit target (the
 * absolute error is below one unit in the last place shown). The caller
 * owns the string; release it with [`hb_string_free`].
 *
 * # Safety
 * As for [`hb_eval_h_f64`], with `out` pointing to a writable `char *`.
 */
enum HbStatus hb_eval_h_decimal(const struct HbEvaluator *ev,
                                const char *alpha,
                                const char *x,
                                char **out);

/**
 * `rho(x)` as a decimal string; see [`hb_eval_h_decimal`] for ownership.
 *
 * # Safety
 * As for [`hb_eval_rho_f64`], with `out` pointing to a writable `char *`.
 */
enum HbStatus hb_eval_rho_decimal(const struct HbEvaluator *ev, const char *x, char **out);

/**
 * `g(x)` as a decimal string; see [`hb_eval_h_decimal`] for ownership.
 *
 * # Safety
 * As for [`hb_eval_rho_f64`], with `out` pointing to a writable `char *`.
 */
enum HbStatus hb_eval_g_decimal(const struct HbEvaluator *ev, const char *x, char **out);

/**
 * Exact moment `t_n` as a rational string (for example `"1465/3402"` at
 * `n = 5`). `n` must not exceed 10000. The caller owns the string.
 *
 * # Safety
 * `out` must point to a writable `char *`.
 */
enum HbStatus hb_moment_t(uint32_t n, char **out);

/**
 * Exact check of `(n+1) t_n > c` for every `n` in `n_from..=n_to`.
 * `*out_all_pass` becomes 1 when the whole range passes, 0 otherwise.
 *
 * # Safety
 * `c` must be a NUL-terminated string; `out_all_pass` must be writable.
 */
enum HbStatus hb_verify_moment_bound(const char *c,
                                     uint32_t n_from,
                                     uint32_t n_to,
                                     int32_t *out_all_pass);

/**
 * Least cutoff with `(n+1) t_n > c` certified for every `n` at or beyond
 * it, via the `sigma`-tail lower bound (`1/2 < sigma < 1`). On success
 * `*out_valid` is 1 and `*out_threshold` holds the cutoff; when the chosen
 * `sigma` certifies nothing, `*out_valid` is 0.
 *
 * # Safety
 * `c` and `sigma` must be NUL-terminated strings; both out pointers must
 * be writable.
 */
enum HbStatus hb_tail_threshold(const char *c,
                                const char *sigma,
                                uint32_t digits,
                                int32_t *out_valid,
                                uint32_t *out_threshold);

/**
 * Exact positivity of the order-`n` truncation on the positive half-line
 * at the given `alpha`; `*out_positive` becomes 1 or 0. `n` must not
 * exceed 200.
 *
 * # Safety
 * `alpha` must be a NUL-terminated string; `out_positive` writable.
 */
enum HbStatus hb_certify_pn_positive(uint32_t n, const char *alpha, int32_t *out_positive);

/**
 * Certified rational bracket for the Bernstein threshold: on success
 * `*out_lower` and `*out_upper` receive rational strings with
 * `upper - lower <= 10^-target_digits`, the lower endpoint carrying a
 * positivity certificate and the upper a refutation, and `*out_n_used`
 * the truncation order that produced them (auto-escalated from
 * `n_start`). `n_start` must not exceed 200 and `target_digits` must lie
 * in `1..=30`. The caller owns both strings.
 *
 * # Safety
 * All out pointers must be writable.
 */
enum HbStatus hb_bracket_beta_star(uint32_t n_start,
                                   uint32_t target_digits,
                                   char **out_lower,
                                   char **out_upper,
                                   uint32_t *out_n_used);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HORNBERN_H */
