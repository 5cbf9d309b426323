#ifndef SEPPROB_H
#define SEPPROB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SepprobStatus {
  SEPPROB_STATUS_OK = 0,
  SEPPROB_STATUS_INVALID_ARGUMENT = 1,
  SEPPROB_STATUS_BUDGET_EXCEEDED = 2,
  SEPPROB_STATUS_INVARIANT = 3,
  SEPPROB_STATUS_NULL_POINTER = 4,
  SEPPROB_STATUS_PANIC = 5,
} SepprobStatus;

/**
 * An enumerator with its own budget and thread pool.
 */
typedef struct SepprobOracle SepprobOracle;

/**
 * A computed count and/or probability.
 */
typedef struct SepprobValue SepprobValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Separation probability for cycle type `lambda` and block sizes `alpha`.
 *
 * # Safety
 * `lambda` and `alpha` point to `lambda_len` and `alpha_len` readable
 * values; `out` is writable.
 */
enum SepprobStatus sepprob_sep_prob(const size_t *lambda,
                                    size_t lambda_len,
                                    const size_t *alpha,
                                    size_t alpha_len,
                                    struct SepprobValue **out);

/**
 * The number of separated pairs, with the probability alongside.
 *
 * # Safety
 * As for [`sepprob_sep_prob`].
 */
enum SepprobStatus sepprob_count_s(const size_t *lambda,
                                   size_t lambda_len,
                                   const size_t *alpha,
                                   size_t alpha_len,
                                   struct SepprobValue **out);

/**
 * Two uniform `n`-cycles.
 *
 * # Safety
 * `alpha` points to `alpha_len` readable values; `out` is writable.
 */
enum SepprobStatus sepprob_ncycle(size_t n,
                                  const size_t *alpha,
                                  size_t alpha_len,
                                  struct SepprobValue **out);

/**
 * Uniform permutations of `[n]` with `p` cycles.
 *
 * # Safety
 * As for [`sepprob_ncycle`].
 */
enum SepprobStatus sepprob_pcycles(size_t n,
                                   size_t p,
                                   const size_t *alpha,
                                   size_t alpha_len,
                                   struct SepprobValue **out);

/**
 * Fixed-point-free involutions of `[2 * half]`.
 *
 * # Safety
 * As for [`sepprob_ncycle`].
 */
enum SepprobStatus sepprob_involution(size_t half,
                                      const size_t *alpha,
                                      size_t alpha_len,
                                      struct SepprobValue **out);

/**
 * Number of ways to write a fixed permutation of type `alpha` as a
 * product of one of type `lambda` and an `n`-cycle. Only the count is set.
 *
 * # Safety
 * As for [`sepprob_sep_prob`].
 */
enum SepprobStatus sepprob_connection(const size_t *lambda,
                                      size_t lambda_len,
                                      const size_t *alpha,
                                      size_t alpha_len,
                                      struct SepprobValue **out);

/**
 * Creates an enumerator accepting `n <= max_n`. `threads == 0` uses all cores.
 *
 * # Safety
 * `out` is writable.
 */
enum SepprobStatus sepprob_oracle_new(size_t max_n, size_t threads, struct SepprobOracle **out);

/**
 * Separation probability by exhaustive enumeration.
 *
 * # Safety
 * `oracle` came from [`sepprob_oracle_new`]; other pointers as for
 * [`sepprob_sep_prob`].
 */
enum SepprobStatus sepprob_oracle_sep_prob(const struct SepprobOracle *oracle,
                                           const size_t *lambda,
                                           size_t lambda_len,
                                           const size_t *alpha,
                                           size_t alpha_len,
                                           struct SepprobValue **out);

/**
 * # Safety
 * `oracle` is null or came from [`sepprob_oracle_new`] and is not used again.
 */
void sepprob_oracle_free(struct SepprobOracle *oracle);

/**
 * The probability as `"p/q"` in lowest terms, or null when the value has
 * none. The caller frees the string.
 *
 * # Safety
 * `value` came from this library; `out` is writable.
 */
enum SepprobStatus sepprob_value_probability(const struct SepprobValue *value, char **out);

/**
 * The count in decimal, or null when the value has none. The caller frees
 * the string.
 *
 * # Safety
 * As for [`sepprob_value_probability`].
 */
enum SepprobStatus sepprob_value_count(const struct SepprobValue *value, char **out);

/**
 * The method tag, e.g. `"generating-function"`. The caller frees the string.
 *
 * # Safety
 * As for [`sepprob_value_probability`].
 */
enum SepprobStatus sepprob_value_method(const struct SepprobValue *value, char **out);

/**
 * # Safety
 * `value` is null or came from this library and is not used again.
 */
void sepprob_value_free(struct SepprobValue *value);

/**
 * # Safety
 * `s` is null or a string returned by this library and is not used again.
 */
void sepprob_string_free(char *s);

/**
 * The message for the most recent failure on this thread, or null. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *sepprob_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEPPROB_H */
