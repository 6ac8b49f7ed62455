#ifndef INVSPAN_H
#define INVSPAN_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum InvspanSolveStatus {
  INVSPAN_SOLVE_STATUS_OPTIMAL = 0,
  INVSPAN_SOLVE_STATUS_INFEASIBLE = 1,
} InvspanSolveStatus;

typedef enum InvspanStatus {
  INVSPAN_STATUS_OK = 0,
  INVSPAN_STATUS_NULL_ARGUMENT = 1,
  INVSPAN_STATUS_INVALID_UTF8 = 2,
  INVSPAN_STATUS_PARSE = 3,
  INVSPAN_STATUS_INVALID_INSTANCE = 4,
  INVSPAN_STATUS_TOO_LARGE = 5,
  INVSPAN_STATUS_ITERATION_CAP = 6,
  INVSPAN_STATUS_CONSTRAINED = 7,
  /**
   * The solution is infeasible, so it has no span or deviation.
   */
  INVSPAN_STATUS_NOT_OPTIMAL = 8,
  INVSPAN_STATUS_OUT_OF_RANGE = 9,
  INVSPAN_STATUS_INTERNAL = 10,
  INVSPAN_STATUS_PANIC = 11,
} InvspanStatus;

/**
 * Opaque instance handle.
 */
typedef struct InvspanInstance InvspanInstance;

/**
 * Opaque solution handle.
 */
typedef struct InvspanSolution InvspanSolution;

typedef struct InvspanSolveOptions {
  /**
   * Iterations allowed per subproblem; 0 picks the default bound.
   */
  uint64_t cap;
  /**
   * Worker threads; 0 or 1 solves subproblems one after another.
   */
  uint32_t parallel;
  /**
   * Keep the iteration trace in the solution JSON.
   */
  bool with_trace;
} InvspanSolveOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *invspan_version(void);

/**
 * Message for the last failed call on this thread, or NULL. The pointer stays
 * valid until the next call into this library from the same thread.
 */
const char *invspan_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void invspan_string_free(char *s);

/**
 * Parses and validates an instance given as JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum InvspanStatus invspan_instance_from_json(const char *json, struct InvspanInstance **out);

/**
 * Number of ground-set elements; 0 for NULL.
 *
 * # Safety
 * `inst` must be NULL or a live instance handle.
 */
size_t invspan_instance_len(const struct InvspanInstance *inst);

/**
 * Releases an instance. NULL is ignored.
 *
 * # Safety
 * `inst` must be NULL or a handle from [`invspan_instance_from_json`] that is
 * not used afterwards.
 */
void invspan_instance_free(struct InvspanInstance *inst);

/**
 * Solves an instance with any number of cost vectors. `options` may be NULL.
 * An infeasible instance still yields a solution handle with status
 * `INVSPAN_SOLVE_STATUS_INFEASIBLE`.
 *
 * # Safety
 * `inst` must be a live instance handle, `options` NULL or readable, and
 * `out` writable.
 */
enum InvspanStatus invspan_solve(const struct InvspanInstance *inst,
                                 const struct InvspanSolveOptions *options,
                                 struct InvspanSolution **out);

/**
 * # Safety
 * `sol` must be a live solution handle.
 */
enum InvspanSolveStatus invspan_solution_status(const struct InvspanSolution *sol);

/**
 * # Safety
 * `sol` must be NULL or a live solution handle.
 */
uint64_t invspan_solution_iterations(const struct InvspanSolution *sol);

/**
 * # Safety
 * `sol` must be NULL or a live solution handle.
 */
uint64_t invspan_solution_oracle_calls(const struct InvspanSolution *sol);

/**
 * Optimal span as an exact rational string such as `"3/2"`.
 *
 * # Safety
 * `sol` must be a live solution handle and `out` writable.
 */
enum InvspanStatus invspan_solution_span(const struct InvspanSolution *sol, char **out);

/**
 * Optimal span rounded to the nearest double.
 *
 * # Safety
 * `sol` must be a live solution handle and `out` writable.
 */
enum InvspanStatus invspan_solution_span_f64(const struct InvspanSolution *sol, double *out);

/**
 * Deviation of element `index` (in instance order) as a rational string.
 *
 * # Safety
 * `sol` must be a live solution handle and `out` writable.
 */
enum InvspanStatus invspan_solution_deviation(const struct InvspanSolution *sol,
                                              size_t index,
                                              char **out);

/**
 * The solution in the same JSON layout as `invspan solve`.
 *
 * # Safety
 * `sol` must be a live solution handle and `out` writable.
 */
enum InvspanStatus invspan_solution_to_json(const struct InvspanSolution *sol, char **out);

/**
 * Releases a solution. NULL is ignored.
 *
 * # Safety
 * `sol` must be NULL or a handle from [`invspan_solve`] that is not used
 * afterwards.
 */
void invspan_solution_free(struct InvspanSolution *sol);

/**
 * Min-max certificate of an instance without bounds, as JSON.
 *
 * # Safety
 * `inst` must be a live instance handle and `out` writable.
 */
enum InvspanStatus invspan_minmax_json(const struct InvspanInstance *inst, char **out);

/**
 * Cross-checks the solver against the brute-force LPs and the feasibility
 * witnesses. `*passed` is set when every check agrees. `report` may be NULL;
 * otherwise it receives the JSON report.
 *
 * # Safety
 * `inst` must be a live instance handle, `passed` writable, and `report`
 * NULL or writable.
 */
enum InvspanStatus invspan_verify(const struct InvspanInstance *inst, bool *passed, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INVSPAN_H */
