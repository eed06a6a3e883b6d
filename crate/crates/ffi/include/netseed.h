#ifndef NETSEED_H
#define NETSEED_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NsStatus {
  NS_STATUS_OK = 0,
  NS_STATUS_NULL_POINTER = 1,
  NS_STATUS_INVALID_PARAM = 2,
  NS_STATUS_SIZE = 3,
  NS_STATUS_NOT_SQUARE = 4,
  NS_STATUS_ROW_SUM = 5,
  NS_STATUS_DIAGONAL = 6,
  NS_STATUS_NEGATIVE_WEIGHT = 7,
  NS_STATUS_DIMENSION = 8,
  NS_STATUS_BOUNDS = 9,
  NS_STATUS_CAPACITY = 10,
  NS_STATUS_SOLVE = 11,
  NS_STATUS_REGIME = 12,
  NS_STATUS_PARSE = 13,
  NS_STATUS_SELF_CHECK = 14,
  NS_STATUS_BUFFER_TOO_SMALL = 15,
  NS_STATUS_PANIC = 16,
} NsStatus;

typedef enum NsFirm {
  NS_FIRM_A = 0,
  NS_FIRM_B = 1,
} NsFirm;

typedef enum NsRegime {
  NS_REGIME_NONE_SEEDABLE = 0,
  NS_REGIME_ALL_SEEDABLE = 1,
  NS_REGIME_GRAPH_DEPENDENT = 2,
} NsRegime;

/**
 * Opaque influence network.
 */
typedef struct NsNetwork NsNetwork;

typedef struct NsParams {
  double alpha;
  double delta;
  double q_a;
  double q_b;
  double c_s;
  double c_q;
  double budget_a;
  double budget_b;
} NsParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *ns_last_error_message(void);

/**
 * Static name of a status code.
 */
const char *ns_status_name(enum NsStatus status);

/**
 * Parameters of the 15-agent worked example.
 */
struct NsParams ns_params_example1(void);

/**
 * # Safety
 * `params` must be NULL or point to a valid `NsParams`.
 */
enum NsStatus ns_params_validate(const struct NsParams *params);

/**
 * Builds a network from `n * n` row-major weights.
 *
 * # Safety
 * `weights` must point to `n * n` readable doubles; `out` must be writable.
 */
enum NsStatus ns_network_from_weights(size_t n, const double *weights, struct NsNetwork **out);

/**
 * Parses the text graph format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum NsStatus ns_network_parse(const char *text, bool normalize, struct NsNetwork **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum NsStatus ns_network_star(size_t n, struct NsNetwork **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum NsStatus ns_network_balanced_ring(size_t n, size_t d, struct NsNetwork **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum NsStatus ns_network_k_star(size_t n, size_t k, struct NsNetwork **out);

/**
 * Releases a network. NULL is ignored.
 *
 * # Safety
 * `net` must be NULL or a handle from an `ns_network_*` constructor that has
 * not been freed.
 */
void ns_network_free(struct NsNetwork *net);

/**
 * Number of agents, or 0 for NULL.
 *
 * # Safety
 * `net` must be NULL or a live handle.
 */
size_t ns_network_size(const struct NsNetwork *net);

/**
 * Writes the `n * n` row-major weights.
 *
 * # Safety
 * `net` must be a live handle; `out` must hold `out_len` doubles.
 */
enum NsStatus ns_network_weights(const struct NsNetwork *net, double *out, size_t out_len);

/**
 * Centrality of every agent into `out` (length at least n).
 *
 * # Safety
 * `net` must be a live handle, `params` valid, `out` must hold `out_len` doubles.
 */
enum NsStatus ns_centrality(const struct NsNetwork *net,
                            const struct NsParams *params,
                            double *out,
                            size_t out_len);

/**
 * `lambda` for an `n`-agent network; NaN when `params` is NULL.
 *
 * # Safety
 * `params` must be NULL or valid.
 */
double ns_lambda(const struct NsParams *params, size_t n);

/**
 * # Safety
 * `params` must be valid; `out_a` and `out_b` writable.
 */
enum NsStatus ns_thresholds(const struct NsParams *params, size_t n, double *out_a, double *out_b);

/**
 * Closed-form firm payoffs from the initial state `y0` (length n).
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum NsStatus ns_firm_utilities(const struct NsNetwork *net,
                                const struct NsParams *params,
                                const double *y0,
                                size_t y0_len,
                                double *out_a,
                                double *out_b);

/**
 * Simulates `horizon` steps from `y0`; writes `(horizon + 1) * n` values,
 * state `t` at offset `t * n`.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum NsStatus ns_simulate(const struct NsNetwork *net,
                          const struct NsParams *params,
                          const double *y0,
                          size_t y0_len,
                          size_t horizon,
                          double *out,
                          size_t out_len);

/**
 * Optimal allocation of `firm`'s budget: seeds into `out_seeds` (length n)
 * and the quality increment into `out_dq`.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum NsStatus ns_optimal_allocation(const struct NsNetwork *net,
                                    const struct NsParams *params,
                                    const double *y0,
                                    size_t y0_len,
                                    enum NsFirm firm,
                                    double *out_seeds,
                                    size_t out_seeds_len,
                                    double *out_dq);

/**
 * Seeding capacity of `firm` with an unlimited budget.
 *
 * # Safety
 * Pointers must be valid for the stated lengths.
 */
enum NsStatus ns_seeding_capacity(const struct NsNetwork *net,
                                  const struct NsParams *params,
                                  const double *y0,
                                  size_t y0_len,
                                  enum NsFirm firm,
                                  double *out_capacity);

/**
 * Maximal number of seedable agents over all `n`-agent graphs. Returns
 * [`NsStatus::Regime`] with `*out_k = n` when every agent is seedable.
 *
 * # Safety
 * `params` must be valid; `out_k` writable.
 */
enum NsStatus ns_max_seed_count(const struct NsParams *params,
                                size_t n,
                                enum NsFirm firm,
                                size_t *out_k);

/**
 * # Safety
 * `params` must be valid; `out_regime` writable.
 */
enum NsStatus ns_classify_regime(const struct NsParams *params,
                                 size_t n,
                                 enum NsFirm firm,
                                 enum NsRegime *out_regime);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NETSEED_H */
