#ifndef PRAT_H
#define PRAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * `p` divides the class number.
 */
#define PRAT_REASON_CLASS_NUMBER_DIVISIBLE 1

/**
 * The unit congruence has no witness.
 */
#define PRAT_REASON_TORSION_NONTRIVIAL 2

/**
 * The criterion does not apply at this prime.
 */
#define PRAT_REASON_NOT_APPLICABLE 4

/**
 * The class field condition could not be decided.
 */
#define PRAT_REASON_CONDITION1_UNDETERMINED 8

/**
 * The class field condition fails.
 */
#define PRAT_REASON_CONDITION1_FAILS 16

/**
 * Result code of every fallible call.
 */
typedef enum PratStatus {
  PRAT_STATUS_OK = 0,
  PRAT_STATUS_NULL_POINTER = 1,
  PRAT_STATUS_INVALID_UTF8 = 2,
  PRAT_STATUS_INPUT_ERROR = 3,
  PRAT_STATUS_DOMAIN_ERROR = 4,
  PRAT_STATUS_UNSUPPORTED = 5,
  PRAT_STATUS_OUT_OF_RANGE = 6,
  PRAT_STATUS_INVARIANT_VIOLATION = 7,
  PRAT_STATUS_PANIC = 8,
} PratStatus;

typedef enum PratVerdictStatus {
  PRAT_VERDICT_STATUS_P_RATIONAL = 0,
  PRAT_VERDICT_STATUS_NOT_P_RATIONAL = 1,
  PRAT_VERDICT_STATUS_UNDETERMINED = 2,
  PRAT_VERDICT_STATUS_NOT_APPLICABLE = 3,
} PratVerdictStatus;

/**
 * A validated field with its unit data.
 */
typedef struct PratField PratField;

/**
 * A set of loaded field records.
 */
typedef struct PratRecordSet PratRecordSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *prat_last_error_message(void);

/**
 * Release a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void prat_string_free(char *s);

/**
 * Build a field from `;`-separated power-basis coefficients (low to high)
 * of the defining polynomial and the fundamental unit. `class_number` 0
 * means unknown. The power basis is used as the integral basis.
 *
 * # Safety
 * `poly` and `unit` must be NUL-terminated strings; `out` must be writable.
 */
enum PratStatus prat_field_new(const char *poly,
                               const char *unit,
                               uint64_t class_number,
                               struct PratField **out);

/**
 * Build the field of record `index` in a record set.
 *
 * # Safety
 * `set` must be a live record set; `out` must be writable.
 */
enum PratStatus prat_record_set_field(const struct PratRecordSet *set,
                                      size_t index,
                                      struct PratField **out);

/**
 * Release a field. NULL is ignored.
 *
 * # Safety
 * `field` must come from this library and not have been freed.
 */
void prat_field_free(struct PratField *field);

/**
 * Decide p-rationality at `p`. `reasons` (may be NULL) receives a bitmask
 * of `PRAT_REASON_*` flags.
 *
 * # Safety
 * `field` must be live; `status` must be writable.
 */
enum PratStatus prat_verdict(const struct PratField *field,
                             uint64_t p,
                             enum PratVerdictStatus *status,
                             uint32_t *reasons);

/**
 * Human-readable verdict report at `p`.
 *
 * # Safety
 * `field` must be live; `out` must be writable.
 */
enum PratStatus prat_verdict_report(const struct PratField *field, uint64_t p, char **out);

/**
 * Load field records from a CSV file. Rows failing validation are skipped
 * and counted (see [`prat_record_set_rejected`]).
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum PratStatus prat_record_set_load_csv(const char *path, struct PratRecordSet **out);

/**
 * Parse field records from CSV text.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum PratStatus prat_record_set_parse_csv(const char *text, struct PratRecordSet **out);

/**
 * Number of records in the set (0 for NULL).
 *
 * # Safety
 * `set` must be live or NULL.
 */
size_t prat_record_set_len(const struct PratRecordSet *set);

/**
 * Number of rows skipped by validation when the set was loaded.
 *
 * # Safety
 * `set` must be live or NULL.
 */
size_t prat_record_set_rejected(const struct PratRecordSet *set);

/**
 * Release a record set. NULL is ignored.
 *
 * # Safety
 * `set` must come from this library and not have been freed.
 */
void prat_record_set_free(struct PratRecordSet *set);

/**
 * Exceptional-prime table over `pmin <= p <= pmax` as CSV text.
 *
 * # Safety
 * `set` must be live; `out` must be writable.
 */
enum PratStatus prat_table_csv(const struct PratRecordSet *set,
                               uint64_t pmin,
                               uint64_t pmax,
                               char **out);

/**
 * `F_n mod modulus` for `F_{n+3} = a2 F_{n+2} + a1 F_{n+1} + a0 F_n` with
 * `F_0 = F_1 = 0`, `F_2 = 1`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PratStatus prat_recurrence_value(int64_t a2,
                                      int64_t a1,
                                      int64_t a0,
                                      uint64_t n,
                                      uint64_t modulus,
                                      uint64_t *out);

/**
 * Class number of `Q(sqrt(radicand))` for a negative squarefree radicand.
 *
 * # Safety
 * `out` must be writable.
 */
enum PratStatus prat_imag_quadratic_class_number(int64_t radicand, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRAT_H */
