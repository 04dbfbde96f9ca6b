/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef PRESDEC_H
#define PRESDEC_H

#include <stdbool.h>
#include <stdint.h>

/*
 Result of every fallible call.
 */
typedef enum PresdecStatus {
  PRESDEC_STATUS_OK = 0,
  /*
   Null pointer, invalid UTF-8 or a malformed argument.
   */
  PRESDEC_STATUS_INVALID_ARGUMENT = 1,
  /*
   The input text is not in the supported SMT-LIB subset.
   */
  PRESDEC_STATUS_PARSE_ERROR = 2,
  PRESDEC_STATUS_NOT_DECOMPOSABLE = 3,
  /*
   Time, node or size budget exhausted.
   */
  PRESDEC_STATUS_RESOURCE_LIMIT = 4,
  /*
   The external solver failed or misbehaved.
   */
  PRESDEC_STATUS_BACKEND_FAILURE = 5,
  /*
   A bug: an internal check failed or a panic was caught.
   */
  PRESDEC_STATUS_INTERNAL = 6,
} PresdecStatus;

/*
 A parsed quantifier-free formula.
 */
typedef struct PresdecFormula PresdecFormula;

/*
 Solver settings and the last error message.
 */
typedef struct PresdecSession PresdecSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 New session using the built-in solver (or `$PRESDEC_SOLVER` when set).
 */
struct PresdecSession *presdec_session_new(void);

/*
 Switches the session to an external SMT-LIB solver command such as
 `"z3 -in"`; null selects the built-in solver.

 # Safety
 `session` is a live session; `command` is null or a NUL-terminated string.
 */
enum PresdecStatus presdec_session_set_solver(struct PresdecSession *session, const char *command);

/*
 Time budget per call in milliseconds; 0 removes it.

 # Safety
 `session` is null or a live session.
 */
enum PresdecStatus presdec_session_set_timeout_ms(struct PresdecSession *session, uint64_t ms);

/*
 Largest decomposition, in disjuncts, the session will build.

 # Safety
 `session` is null or a live session.
 */
enum PresdecStatus presdec_session_set_max_disjuncts(struct PresdecSession *session, uint64_t n);

/*
 # Safety
 `session` is null or a session not yet freed.
 */
void presdec_session_free(struct PresdecSession *session);

/*
 Message of the last failed call on the session, or an empty string.
 The pointer stays valid until the next call on the session.

 # Safety
 `session` is null or a live session.
 */
const char *presdec_last_error(const struct PresdecSession *session);

/*
 Static description of a status code.
 */
const char *presdec_status_message(enum PresdecStatus status);

/*
 Releases a string returned by this library.

 # Safety
 `s` is null or a string returned by this library and not yet freed.
 */
void presdec_string_free(char *s);

/*
 # Safety
 `formula` is null or a formula not yet freed.
 */
void presdec_formula_free(struct PresdecFormula *formula);

/*
 Parses an SMT-LIB script (declarations and assertions over Int).

 # Safety
 `session` is live, `text` is a NUL-terminated string and `out` is
 writable. On success `*out` owns a new formula.
 */
enum PresdecStatus presdec_formula_parse(const struct PresdecSession *session,
                                         const char *text,
                                         struct PresdecFormula **out);

/*
 SMT-LIB script for the formula; free with [`presdec_string_free`].

 # Safety
 `formula` is null or live.
 */
char *presdec_formula_to_smtlib(const struct PresdecFormula *formula);

/*
 # Safety
 `session` and `formula` are live; `out_sat` is writable.
 */
enum PresdecStatus presdec_check_sat(const struct PresdecSession *session,
                                     const struct PresdecFormula *formula,
                                     bool *out_sat);

/*
 Whether the formula is monadically decomposable.

 # Safety
 `session` and `formula` are live; `out_decomposable` is writable.
 */
enum PresdecStatus presdec_check_monadic(const struct PresdecSession *session,
                                         const struct PresdecFormula *formula,
                                         bool *out_decomposable);

/*
 Whether the formula is decomposable on one variable.

 # Safety
 `session` and `formula` are live, `var` is NUL-terminated and
 `out_decomposable` is writable.
 */
enum PresdecStatus presdec_check_decomposable_on(const struct PresdecSession *session,
                                                 const struct PresdecFormula *formula,
                                                 const char *var,
                                                 bool *out_decomposable);

/*
 Whether the formula is decomposable along a partition such as
 `"{x},{y,z}"`.

 # Safety
 `session` and `formula` are live, `partition` is NUL-terminated and
 `out_decomposable` is writable.
 */
enum PresdecStatus presdec_check_pi(const struct PresdecSession *session,
                                    const struct PresdecFormula *formula,
                                    const char *partition,
                                    bool *out_decomposable);

/*
 Equivalent monadic formula.

 # Safety
 `session` and `formula` are live; `out` is writable. On success `*out`
 owns a new formula.
 */
enum PresdecStatus presdec_decompose_full(const struct PresdecSession *session,
                                          const struct PresdecFormula *formula,
                                          struct PresdecFormula **out);

/*
 Equivalent formula in which `var` occurs only in atoms of its own.

 # Safety
 As [`presdec_decompose_full`]; `var` is NUL-terminated.
 */
enum PresdecStatus presdec_decompose_on(const struct PresdecSession *session,
                                        const struct PresdecFormula *formula,
                                        const char *var,
                                        struct PresdecFormula **out);

/*
 Decomposition along a partition such as `"{x},{y,z}"`.

 # Safety
 As [`presdec_decompose_full`]; `partition` is NUL-terminated.
 */
enum PresdecStatus presdec_pi_decompose(const struct PresdecSession *session,
                                        const struct PresdecFormula *formula,
                                        const char *partition,
                                        struct PresdecFormula **out);

/*
 Eliminates the single quantifier block of an SMT-LIB script.

 # Safety
 `session` is live, `text` is NUL-terminated and `out` is writable. On
 success `*out` owns a new formula.
 */
enum PresdecStatus presdec_eliminate(const struct PresdecSession *session,
                                     const char *text,
                                     struct PresdecFormula **out);

/*
 JSON report of the per-variable check, in the command-line report
 format; free with [`presdec_string_free`].

 # Safety
 `session` and `formula` are live; `out_json` is writable.
 */
enum PresdecStatus presdec_report_json(const struct PresdecSession *session,
                                       const struct PresdecFormula *formula,
                                       char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRESDEC_H */
