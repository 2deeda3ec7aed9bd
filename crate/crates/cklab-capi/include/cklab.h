/* C interface to the cklab verification laboratory. */

#ifndef CKLAB_H
#define CKLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a C-ABI call.
typedef enum CklabStatus {
  // The call completed; any verification verdict is in the report.
  CKLAB_STATUS_SUCCESS = 0,
  // A required pointer argument was null.
  CKLAB_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  CKLAB_STATUS_INVALID_UTF8 = 2,
  // The config document failed to parse or validate.
  CKLAB_STATUS_INVALID_CONFIG = 3,
  // The run aborted internally (a defect, not a failed check).
  CKLAB_STATUS_RUN_FAILED = 4,
} CklabStatus;

// Opaque handle to a finished run's report.
typedef struct CklabReport CklabReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Runs the batch described by a JSON config document.
//
// On success, `*out_report` receives a fresh handle the caller must
// release with [`cklab_report_free`]. On any other status,
// `*out_report` is set to null.
//
// # Safety
//
// `config_json` must point to a NUL-terminated string and `out_report`
// to writable storage for one pointer.
enum CklabStatus cklab_run_json(const char *config_json, struct CklabReport **out_report);

// Whether every entry of the report passed. Null reports read as
// false.
bool cklab_report_overall(const struct CklabReport *report);

// Number of entries in the report. Null reports read as 0.
size_t cklab_report_entry_count(const struct CklabReport *report);

// Renders the report as a JSON document. Returns null for a null
// report. The caller frees the string with [`cklab_string_free`].
char *cklab_report_json(const struct CklabReport *report);

// Renders the report as CSV (header row plus one row per entry).
// Returns null for a null report. The caller frees the string with
// [`cklab_string_free`].
char *cklab_report_csv(const struct CklabReport *report);

// Releases a string returned by this library. Null is a no-op.
//
// # Safety
//
// `s` must be a pointer previously returned by [`cklab_report_json`] or
// [`cklab_report_csv`], unreleased, or null.
void cklab_string_free(char *s);

// Releases a report handle. Null is a no-op.
//
// # Safety
//
// `report` must be a handle previously returned by [`cklab_run_json`],
// unreleased, or null.
void cklab_report_free(struct CklabReport *report);

// The library version as a static NUL-terminated string (never freed).
const char *cklab_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CKLAB_H */
