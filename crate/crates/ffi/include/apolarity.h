#ifndef APOLARITY_H
#define APOLARITY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum ApStatus {
  AP_STATUS_OK = 0,
  AP_STATUS_NULL_POINTER = 1,
  AP_STATUS_INVALID_UTF8 = 2,
  AP_STATUS_PARSE = 3,
  AP_STATUS_INVALID_INPUT = 4,
  AP_STATUS_PRECONDITION = 5,
  AP_STATUS_BUFFER_TOO_SMALL = 6,
  AP_STATUS_BUDGET = 7,
  AP_STATUS_INTERNAL = 8,
} ApStatus;

/**
 * Opaque handle to a homogeneous form.
 */
typedef struct ApForm ApForm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse `poly` over the comma-separated variable list `vars`.
 *
 * # Safety
 * `vars` and `poly` must be NUL-terminated strings; `out` must be writable.
 */
enum ApStatus ap_form_parse(const char *vars, const char *poly, struct ApForm **out);

/**
 * Build a named family. `params` holds `key=value` pairs separated by
 * commas and may be null.
 *
 * # Safety
 * `name` and non-null `params` must be NUL-terminated strings; `out` must be writable.
 */
enum ApStatus ap_form_from_family(const char *name,
                                  const char *params,
                                  uint64_t seed,
                                  struct ApForm **out);

/**
 * Release a form; null is ignored.
 *
 * # Safety
 * `form` must come from this library and not have been freed.
 */
void ap_form_free(struct ApForm *form);

/**
 * # Safety
 * `form` must be a live handle; `out` must be writable.
 */
enum ApStatus ap_form_degree(const struct ApForm *form, uint32_t *out);

/**
 * # Safety
 * `form` must be a live handle; `out` must be writable.
 */
enum ApStatus ap_form_nvars(const struct ApForm *form, size_t *out);

/**
 * Text of the form; free with `ap_string_free`.
 *
 * # Safety
 * `form` must be a live handle; `out` must be writable.
 */
enum ApStatus ap_form_render(const struct ApForm *form, char **out);

/**
 * Hilbert function into `buf` (capacity `cap`). `len` always receives the
 * full length; `BufferTooSmall` is returned if it exceeds `cap`.
 *
 * # Safety
 * `buf` must hold `cap` elements (may be null when `cap` is 0); `len` must be writable.
 */
enum ApStatus ap_hilbert(const struct ApForm *form, size_t *buf, size_t cap, size_t *len);

/**
 * Waring rank of a binary form.
 *
 * # Safety
 * `form` must be a live handle; `out` must be writable.
 */
enum ApStatus ap_binary_rank(const struct ApForm *form, size_t *out);

/**
 * Wild-form certificate as JSON; free with `ap_string_free`.
 *
 * # Safety
 * `form` must be a live handle; `out` must be writable.
 */
enum ApStatus ap_wild_certificate_json(const struct ApForm *form, char **out);

/**
 * Full analysis report as JSON (timestamp omitted); free with `ap_string_free`.
 *
 * # Safety
 * `form` must be a live handle; `out` must be writable.
 */
enum ApStatus ap_analyze_json(const struct ApForm *form, char **out);

/**
 * Release a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ap_string_free(char *s);

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *ap_last_error_message(void);

/**
 * Library version, statically allocated.
 */
const char *ap_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* APOLARITY_H */
