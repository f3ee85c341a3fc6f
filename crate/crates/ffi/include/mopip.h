#ifndef MOPIP_H
#define MOPIP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MopipConstraintKind {
  MOPIP_CONSTRAINT_KIND_OBJECTIVE = 0,
  MOPIP_CONSTRAINT_KIND_INEQUALITY = 1,
  MOPIP_CONSTRAINT_KIND_EQUALITY = 2,
} MopipConstraintKind;

// Status codes returned by every fallible function.
typedef enum MopipError {
  MOPIP_ERROR_OK = 0,
  MOPIP_ERROR_NULL_POINTER = 1,
  MOPIP_ERROR_INVALID_UTF8 = 2,
  MOPIP_ERROR_PARSE = 3,
  MOPIP_ERROR_INVALID_ARGUMENT = 4,
  MOPIP_ERROR_BUDGET_EXCEEDED = 5,
  MOPIP_ERROR_SOLVE = 6,
  MOPIP_ERROR_OUT_OF_RANGE = 7,
  MOPIP_ERROR_PANIC = 8,
} MopipError;

// Outcome stored in a result handle.
typedef enum MopipStatus {
  MOPIP_STATUS_SOLVED = 0,
  MOPIP_STATUS_INFEASIBLE = 1,
} MopipStatus;

// A problem under construction or loaded from JSON.
typedef struct MopipProblem MopipProblem;

// The Pareto set returned by [`mopip_solve`].
typedef struct MopipResult MopipResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Last error message on this thread, or null. The string stays valid until
// the next failing call on the same thread.
const char *mopip_last_error(void);

// Library version as a static NUL-terminated string.
const char *mopip_version(void);

// Creates an empty problem over binary variables `x1..xn`.
//
// # Safety
// `out` must be a valid pointer to writable storage.
enum MopipError mopip_problem_new(size_t n, struct MopipProblem **out);

// Parses a problem from an instance document.
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum MopipError mopip_problem_from_json(const char *json, struct MopipProblem **out);

// Generates a benchmark instance, e.g. family `"biobj_linkn"`.
//
// # Safety
// `family` must be a NUL-terminated string and `out` writable.
enum MopipError mopip_problem_generate(const char *family,
                                       size_t n,
                                       uint64_t seed,
                                       struct MopipProblem **out);

// Releases a problem. Null is ignored.
//
// # Safety
// `problem` must come from this library and not be used afterwards.
void mopip_problem_free(struct MopipProblem *problem);

// Appends a polynomial written as e.g. `"3*x1 - 2/5*x2^2 + 1"`.
// Inequalities read `p <= 0`, equalities `p = 0`.
//
// # Safety
// `problem` must be a live handle and `expr` a NUL-terminated string.
enum MopipError mopip_problem_add(struct MopipProblem *problem,
                                  enum MopipConstraintKind kind,
                                  const char *expr);

// Number of decision variables.
//
// # Safety
// `problem` must be a live handle or null (returns 0).
size_t mopip_problem_num_vars(const struct MopipProblem *problem);

// Serializes a problem to an instance document. Free the string with
// [`mopip_string_free`].
//
// # Safety
// `problem` must be a live handle and `out` writable.
enum MopipError mopip_problem_to_json(const struct MopipProblem *problem, char **out);

// Solves with the named algorithm (`alg1`, `kkt`, `kkt_sl`, `fj`, `fj_sl`,
// `mofj` or `brute`). A `budget` of 0 keeps the default step budget.
//
// # Safety
// `problem` must be a live handle, `algorithm` a NUL-terminated string and
// `out` writable.
enum MopipError mopip_solve(const struct MopipProblem *problem,
                            const char *algorithm,
                            uint64_t budget,
                            struct MopipResult **out);

// Releases a result. Null is ignored.
//
// # Safety
// `result` must come from this library and not be used afterwards.
void mopip_result_free(struct MopipResult *result);

// # Safety
// `result` must be a live handle.
enum MopipStatus mopip_result_status(const struct MopipResult *result);

// Number of nondominated points `x` (the size of `X_E`).
//
// # Safety
// `result` must be a live handle or null (returns 0).
size_t mopip_result_num_points(const struct MopipResult *result);

// Number of distinct objective vectors (the size of `Y_E`).
//
// # Safety
// `result` must be a live handle or null (returns 0).
size_t mopip_result_num_values(const struct MopipResult *result);

// Gröbner and total wall time in milliseconds.
//
// # Safety
// `result` must be a live handle; the output pointers may be null.
void mopip_result_timings(const struct MopipResult *result, uint64_t *gb_ms, uint64_t *total_ms);

// Copies point `index` of `X_E` (sorted lexicographically) into `buf`,
// which must hold `len >= n` bytes of 0/1 values.
//
// # Safety
// `result` must be a live handle and `buf` valid for `len` writes.
enum MopipError mopip_result_point(const struct MopipResult *result,
                                   size_t index,
                                   uint8_t *buf,
                                   size_t len);

// Objective `objective` at point `index` as a fraction `num/den` with
// `den > 0`. Fails with `OutOfRange` when either part exceeds 64 bits.
//
// # Safety
// `result` must be a live handle and `num`, `den` writable.
enum MopipError mopip_result_value(const struct MopipResult *result,
                                   size_t index,
                                   size_t objective,
                                   int64_t *num,
                                   int64_t *den);

// Result document with exact `num/den` strings. Free with
// [`mopip_string_free`].
//
// # Safety
// `result` must be a live handle and `out` writable.
enum MopipError mopip_result_to_json(const struct MopipResult *result, char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void mopip_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOPIP_H */
