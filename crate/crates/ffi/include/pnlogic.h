#ifndef PNLOGIC_H
#define PNLOGIC_H

/* Generated by cbindgen from pnlogic-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of a fallible call.
 */
typedef enum PnStatus {
  PN_STATUS_OK = 0,
  PN_STATUS_NULL_POINTER = 1,
  PN_STATUS_INVALID_UTF8 = 2,
  PN_STATUS_PARSE_ERROR = 3,
  PN_STATUS_INVALID_ARGUMENT = 4,
  PN_STATUS_EVAL_ERROR = 5,
  PN_STATUS_BUDGET_EXCEEDED = 6,
} PnStatus;

/**
 * Necessity interpretations exposed through the C ABI.
 */
typedef enum PnBoxMode {
  PN_BOX_MODE_STANDARD = 0,
  PN_BOX_MODE_SIMPLE = 1,
} PnBoxMode;

/**
 * Opaque parsed formula.
 */
typedef struct PnFormula PnFormula;

/**
 * Opaque model (frame plus valuation).
 */
typedef struct PnModel PnModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Takes the most recent error message, or null when none is pending.
 * The caller owns the returned string.
 */
char *pn_last_error_message(void);

/**
 * Releases a string returned by this library. Null is accepted.
 *
 * # Safety
 * `s` must have been returned by a `pnlogic-ffi` function and not
 * freed before.
 */
void pn_string_free(char *s);

/**
 * Parses a formula. On success stores a handle in `out`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid
 * pointer to writable memory.
 */
enum PnStatus pn_formula_parse(const char *text, struct PnFormula **out);

/**
 * Renders a formula in the ASCII grammar; null on null input. The
 * caller owns the returned string.
 *
 * # Safety
 * `f` must be a live handle from [`pn_formula_parse`] or null.
 */
char *pn_formula_print(const struct PnFormula *f);

/**
 * Releases a formula handle. Null is accepted.
 *
 * # Safety
 * `f` must be a handle from [`pn_formula_parse`], not freed before.
 */
void pn_formula_free(struct PnFormula *f);

/**
 * Parses a model file (JSON). A file without a valuation is accepted
 * with every atom empty.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid
 * pointer to writable memory.
 */
enum PnStatus pn_model_parse_json(const char *text, struct PnModel **out);

/**
 * Releases a model handle. Null is accepted.
 *
 * # Safety
 * `m` must be a handle from [`pn_model_parse_json`], not freed before.
 */
void pn_model_free(struct PnModel *m);

/**
 * Number of worlds, or -1 on null input.
 *
 * # Safety
 * `m` must be a live model handle or null.
 */
int32_t pn_model_world_count(const struct PnModel *m);

/**
 * Condition table for the model as a JSON array (order axioms,
 * condition (1), condition (2), star, subset closure, valuation
 * monotonicity); null on null input. The caller owns the string.
 *
 * # Safety
 * `m` must be a live model handle or null.
 */
char *pn_model_check_json(const struct PnModel *m);

/**
 * Whether `world` forces the formula under the given box mode.
 *
 * # Safety
 * `m` and `f` must be live handles and `out` a valid pointer to
 * writable memory.
 */
enum PnStatus pn_forces(const struct PnModel *m,
                        uint8_t world,
                        const struct PnFormula *f,
                        enum PnBoxMode mode,
                        bool *out);

/**
 * Extension of the formula as a bitmask over world indices.
 *
 * # Safety
 * `m` and `f` must be live handles and `out` a valid pointer to
 * writable memory.
 */
enum PnStatus pn_extension(const struct PnModel *m,
                           const struct PnFormula *f,
                           enum PnBoxMode mode,
                           uint16_t *out);

/**
 * Searches for a countermodel to the scheme and stores a JSON document
 * in `out` with the verdict, search stats, and (when found) the
 * countermodel in the model file format plus a witness block.
 *
 * # Safety
 * `scheme` must be a valid NUL-terminated string and `out` a valid
 * pointer to writable memory.
 */
enum PnStatus pn_search_countermodel_json(const char *scheme,
                                          uint8_t max_worlds,
                                          uint8_t nbhd_family_cap,
                                          enum PnBoxMode mode,
                                          bool require_cond2,
                                          bool require_star,
                                          bool require_starstar,
                                          char **out);

/**
 * Checks a proof file and stores a JSON report
 * `{"valid": bool, "first_error": {"line": n, "reason": "..."} | null}`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid
 * pointer to writable memory.
 */
enum PnStatus pn_proof_check_json(const char *text, char **out);

/**
 * Runs every replication case and stores the JSON summary the CLI
 * prints for `replicate all --json`.
 *
 * # Safety
 * `out` must be a valid pointer to writable memory.
 */
enum PnStatus pn_replicate_all_json(char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PNLOGIC_H */
