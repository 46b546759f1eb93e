#ifndef DULAC_H
#define DULAC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/*
 Result of every fallible call.
 */
typedef enum DulacStatus {
  DULAC_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  DULAC_STATUS_NULL_ARGUMENT = 1,
  /*
   A string argument was not valid UTF-8.
   */
  DULAC_STATUS_INVALID_UTF8 = 2,
  /*
   Malformed JSON, rational or term.
   */
  DULAC_STATUS_PARSE = 3,
  /*
   The field or eigenvalues are not admissible.
   */
  DULAC_STATUS_INVALID_FIELD = 4,
  /*
   The Dulac series needs a field in normal form.
   */
  DULAC_STATUS_NOT_NORMAL_FORM = 5,
  /*
   Evaluation failed (a pole at the point, or `x0` outside `(0, 1]`).
   */
  DULAC_STATUS_EVALUATION = 6,
  /*
   Internal error; the library caught a panic.
   */
  DULAC_STATUS_INTERNAL = 7,
} DulacStatus;

/*
 A polynomial vector field in pre-normal form.
 */
typedef struct DulacField DulacField;

/*
 A truncated Dulac series.
 */
typedef struct DulacSeries DulacSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failing call on this thread; empty if none. The
 pointer stays valid until the next failing call on the same thread.
 */
const char *dulac_last_error(void);

/*
 Release a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void dulac_string_free(char *s);

/*
 Parse a vector-field description (JSON).

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum DulacStatus dulac_field_from_json(const char *json, struct DulacField **out);

/*
 Serialize a field back to JSON.

 # Safety
 `field` must be a live handle; `out` must be writable.
 */
enum DulacStatus dulac_field_to_json(const struct DulacField *field, char **out);

/*
 Release a field. Null is ignored.

 # Safety
 `field` must come from this library and not have been freed.
 */
void dulac_field_free(struct DulacField *field);

/*
 Normal form through `degree`; `degree = 0` uses the field's own degree.
 Only the normalized field is returned.

 # Safety
 `field` must be a live handle; `out` must be writable.
 */
enum DulacStatus dulac_normalize(const struct DulacField *field,
                                 uint32_t degree,
                                 struct DulacField **out);

/*
 Resonant monomials up to `max_degree` for eigenvalues given as rational
 strings (`"2/3"`), as a JSON report.

 # Safety
 `alpha`, `beta` must be NUL-terminated strings; `out` must be writable.
 */
enum DulacStatus dulac_resonances_json(const char *alpha,
                                       const char *beta,
                                       uint32_t max_degree,
                                       char **out);

/*
 Dulac series of a normal form through index order `order`, frozen at the
 centre point `u0` (comma-separated rationals; null or empty for the origin).

 # Safety
 `field` must be a live handle; `u0` null or a NUL-terminated string; `out`
 must be writable.
 */
enum DulacStatus dulac_series_new(const struct DulacField *field,
                                  uint32_t order,
                                  const char *u0,
                                  struct DulacSeries **out);

/*
 Rate offsets `a = α(u0) - α0`, `b = β(u0) - β0` of the base orbit.

 # Safety
 `series` must be a live handle; `a`, `b` must be writable.
 */
enum DulacStatus dulac_series_rate_offsets(const struct DulacSeries *series, double *a, double *b);

/*
 Number of centre variables, the length expected by `dulac_series_eval`.

 # Safety
 `series` must be a live handle or null (returns 0).
 */
uintptr_t dulac_series_centre_dim(const struct DulacSeries *series);

/*
 Evaluate the truncated series at `x0 ∈ (0, 1]` with rate offsets `a`, `b`.
 `u1` may be null; otherwise it receives `u_len` centre values and
 `u_len` must equal `dulac_series_centre_dim`.

 # Safety
 `series` must be a live handle; `y1`, `z1` writable; `u1` null or valid
 for `u_len` writes.
 */
enum DulacStatus dulac_series_eval(const struct DulacSeries *series,
                                   double x0,
                                   double y0,
                                   double z0,
                                   double a,
                                   double b,
                                   double *y1,
                                   double *z1,
                                   double *u1,
                                   uintptr_t u_len);

/*
 Series as JSON, in the same format the command-line tool writes.

 # Safety
 `series` must be a live handle; `out` must be writable.
 */
enum DulacStatus dulac_series_to_json(const struct DulacSeries *series, char **out);

/*
 Release a series. Null is ignored.

 # Safety
 `series` must come from this library and not have been freed.
 */
void dulac_series_free(struct DulacSeries *series);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DULAC_H */
