#ifndef WAYPOINT_H
#define WAYPOINT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WpStatus {
  WP_STATUS_OK = 0,
  WP_STATUS_NULL_POINTER = 1,
  WP_STATUS_INVALID_UTF8 = 2,
  WP_STATUS_PARSE_ERROR = 3,
  WP_STATUS_INVALID_ARGUMENT = 4,
  WP_STATUS_UNSOLVABLE = 5,
  WP_STATUS_TIMEOUT = 6,
  WP_STATUS_INVALID_PLAN = 7,
  WP_STATUS_PANIC = 8,
} WpStatus;

typedef enum WpCostMode {
  WP_COST_MODE_IGNORE = 0,
  WP_COST_MODE_PURE = 1,
  WP_COST_MODE_PLUS_ONE = 2,
} WpCostMode;

/**
 * The best plan found by [`wp_plan`].
 */
typedef struct WpPlan WpPlan;

/**
 * A parsed planning task.
 */
typedef struct WpTask WpTask;

/**
 * Search settings. `weights` may be null to use the default schedule.
 */
typedef struct WpPlanOptions {
  enum WpCostMode cost_mode;
  bool use_landmarks;
  uint64_t boost;
  /**
   * Milliseconds; 0 means no limit.
   */
  uint64_t time_limit_ms;
  const double *weights;
  size_t num_weights;
} WpPlanOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *wp_last_error_message(void);

/**
 * Parses task text into a new handle stored in `*out`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum WpStatus wp_task_parse(const char *text, struct WpTask **out);

/**
 * # Safety
 * `task` must come from [`wp_task_parse`] and not be freed twice. Null is ignored.
 */
void wp_task_free(struct WpTask *task);

struct WpPlanOptions wp_plan_options_default(void);

/**
 * Runs the anytime search and stores the cheapest plan found in `*out`.
 * Returns [`WpStatus::Unsolvable`] or [`WpStatus::Timeout`] with `*out`
 * null when no plan was found.
 *
 * # Safety
 * `task` must be a live handle; `options` may be null for defaults;
 * `weights` must point to `num_weights` doubles if non-null.
 */
enum WpStatus wp_plan(const struct WpTask *task,
                      const struct WpPlanOptions *options,
                      struct WpPlan **out);

/**
 * # Safety
 * `plan` must be a live handle.
 */
uint64_t wp_plan_cost(const struct WpPlan *plan);

/**
 * # Safety
 * `plan` must be a live handle.
 */
size_t wp_plan_len(const struct WpPlan *plan);

/**
 * True if the search proved that no cheaper plan exists.
 *
 * # Safety
 * `plan` must be a live handle.
 */
bool wp_plan_is_proven(const struct WpPlan *plan);

/**
 * Operator name of step `i`, or null if out of range. Owned by the plan.
 *
 * # Safety
 * `plan` must be a live handle.
 */
const char *wp_plan_step_name(const struct WpPlan *plan, size_t i);

/**
 * # Safety
 * `plan` must come from [`wp_plan`] and not be freed twice. Null is ignored.
 */
void wp_plan_free(struct WpPlan *plan);

/**
 * Checks plan text (one `(name)` per line) against the task and stores its
 * cost in `*cost`.
 *
 * # Safety
 * `task` must be a live handle, `plan_text` NUL-terminated, `cost` valid.
 */
enum WpStatus wp_validate(const struct WpTask *task, const char *plan_text, uint64_t *cost);

/**
 * The landmark graph in DOT format. Free the string with [`wp_string_free`].
 *
 * # Safety
 * `task` must be a live handle and `out` valid.
 */
enum WpStatus wp_landmarks_dot(const struct WpTask *task, char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice. Null is ignored.
 */
void wp_string_free(char *s);

/**
 * Score of a run: `best / found` capped at 1, or 0 when `solved` is false.
 *
 * # Safety
 * `out` must be valid.
 */
enum WpStatus wp_ipc_score(bool solved, uint64_t found, uint64_t best, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WAYPOINT_H */
