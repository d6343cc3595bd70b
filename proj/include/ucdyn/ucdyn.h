/* ucdyn: non-autonomous dynamics on compact spaces, C interface.
 *
 * Every function returning ucd_status leaves a message retrievable with
 * ucd_last_error() on failure (per thread). Strings handed out by the
 * library are owned by the caller and released with ucd_string_free().
 * Handles are opaque and released with the matching *_free function.
 */
#ifndef UCDYN_UCDYN_H
#define UCDYN_UCDYN_H

#include <stddef.h>

#if defined(UCDYN_BUILDING_LIBRARY)
#define UCD_API __attribute__((visibility("default")))
#else
#define UCD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ucd_status {
  UCD_OK = 0,
  UCD_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad enum value */
  UCD_ERR_CONFIG = 3,           /* malformed or invalid scenario config */
  UCD_ERR_DOMAIN = 4,           /* value outside a map's or space's domain */
  UCD_ERR_RESOLUTION = 5,       /* binary word lacks trusted coordinates */
  UCD_ERR_HYPOTHESIS = 6,       /* check refused: precondition not met */
  UCD_ERR_IO = 7,               /* file could not be read or written */
  UCD_ERR_UNKNOWN_ID = 8,       /* no catalog scenario with that id */
  UCD_ERR_INTERNAL = 9
} ucd_status;

typedef struct ucd_scenario ucd_scenario;
typedef struct ucd_report ucd_report;

UCD_API const char* ucd_version(void);

/* Message for the last failed call on this thread; "" if none. */
UCD_API const char* ucd_last_error(void);

UCD_API void ucd_string_free(char* s);

/* JSON array of {id, summary, spec}. */
UCD_API ucd_status ucd_catalog_json(char** out_json);

UCD_API ucd_status ucd_scenario_from_json(const char* json, ucd_scenario** out);
UCD_API ucd_status ucd_scenario_from_file(const char* path, ucd_scenario** out);
UCD_API ucd_status ucd_scenario_builtin(const char* id, ucd_scenario** out);

/* Overrides one check field: "horizon", "grid", "eps", "delta", ... The
 * value is parsed as JSON ("500", "0.1", "true"). The scenario is
 * revalidated; on failure it is left unchanged. */
UCD_API ucd_status ucd_scenario_set(ucd_scenario* s, const char* key, const char* value);

/* Restricts the report to one comma-separated list of properties. */
UCD_API ucd_status ucd_scenario_set_properties(ucd_scenario* s, const char* comma_list);

/* Canonical JSON of the scenario. */
UCD_API ucd_status ucd_scenario_json(const ucd_scenario* s, char** out_json);

UCD_API void ucd_scenario_free(ucd_scenario* s);

UCD_API ucd_status ucd_run(const ucd_scenario* s, ucd_report** out);

UCD_API ucd_status ucd_report_json(const ucd_report* r, char** out_json);
UCD_API ucd_status ucd_report_csv(const ucd_report* r, char** out_csv);

/* 1 when no row or cross-check contradicts an applicable theorem. */
UCD_API int ucd_report_consistent(const ucd_report* r);

/* format: "json", "csv" or "plotdata". */
UCD_API ucd_status ucd_report_emit(const ucd_report* r, const char* dir, const char* format);

UCD_API void ucd_report_free(ucd_report* r);

/* Deviation and shifted-deviation records at (n, k) over the scenario's
 * sample points, the isometry-variant check, and the collective-convergence
 * profile, as one JSON object. */
UCD_API ucd_status ucd_bound_json(const ucd_scenario* s, size_t n, size_t k, char** out_json);

/* Collective-convergence profile as CSV (n,k,E,bound,holds). */
UCD_API ucd_status ucd_profile_csv(const ucd_scenario* s, char** out_csv);

/* Verdicts of one property in both modes: {"non-autonomous": ..., "autonomous-limit": ...}. */
UCD_API ucd_status ucd_check_json(const ucd_scenario* s, const char* property, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* UCDYN_UCDYN_H */
