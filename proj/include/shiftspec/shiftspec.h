// Copyright 2026 The shiftspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to shiftspec. All handles are opaque. Every function returns
 * a status code; on failure a description is available from
 * shiftspec_last_error() on the calling thread. Strings returned through
 * char** out-parameters are owned by the caller and released with
 * shiftspec_string_free(). */

#ifndef SHIFTSPEC_SHIFTSPEC_H
#define SHIFTSPEC_SHIFTSPEC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SHIFTSPEC_BUILDING)
#define SHIFTSPEC_API __declspec(dllexport)
#else
#define SHIFTSPEC_API __declspec(dllimport)
#endif
#else
#define SHIFTSPEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct shiftspec_instance shiftspec_instance;

typedef enum shiftspec_status {
  SHIFTSPEC_OK = 0,
  SHIFTSPEC_ERR_PARSE = 1,        /* malformed JSON or schema violation */
  SHIFTSPEC_ERR_INVALID = 2,      /* invalid argument value */
  SHIFTSPEC_ERR_DOMAIN = 3,       /* evaluation outside the map's domain */
  SHIFTSPEC_ERR_UNSUPPORTED = 4,  /* e.g. the moduli route for a series map */
  SHIFTSPEC_ERR_PRECONDITION = 5, /* e.g. simulating a non-J-class operator */
  SHIFTSPEC_ERR_NUMERICAL = 6,    /* divergence, prefix exhaustion */
  SHIFTSPEC_ERR_IO = 7,           /* file could not be read */
  SHIFTSPEC_ERR_NULL = 8,         /* required pointer argument was NULL */
  SHIFTSPEC_ERR_INTERNAL = 9
} shiftspec_status;

typedef enum shiftspec_decision {
  SHIFTSPEC_JCLASS = 0,
  SHIFTSPEC_NOT_JCLASS = 1,
  SHIFTSPEC_UNDECIDED = 2
} shiftspec_decision;

typedef enum shiftspec_route {
  SHIFTSPEC_ROUTE_GEOMETRIC = 0,
  SHIFTSPEC_ROUTE_MODULI = 1,
  SHIFTSPEC_ROUTE_BOTH = 2
} shiftspec_route;

SHIFTSPEC_API const char* shiftspec_version(void);

/* Message of the last failure on this thread ("" if none). */
SHIFTSPEC_API const char* shiftspec_last_error(void);
/* 1-based position of the last JSON syntax error on this thread, 0 if the
 * last error had no position. */
SHIFTSPEC_API void shiftspec_last_error_position(size_t* line, size_t* column);

SHIFTSPEC_API shiftspec_status shiftspec_instance_parse(const char* json, shiftspec_instance** out);
SHIFTSPEC_API shiftspec_status shiftspec_instance_load(const char* path, shiftspec_instance** out);
SHIFTSPEC_API void shiftspec_instance_free(shiftspec_instance* inst);
/* Canonical JSON with every budget filled in. */
SHIFTSPEC_API shiftspec_status shiftspec_instance_to_json(const shiftspec_instance* inst, char** out);

/* name: "gridMax", "windingMax", "truncationN", "tol" or "decisionWidth". */
SHIFTSPEC_API shiftspec_status shiftspec_set_budget(shiftspec_instance* inst, const char* name,
                                                    double value);

/* Spectral profile and spectral picture. */
SHIFTSPEC_API shiftspec_status shiftspec_analyze(const shiftspec_instance* inst, char** json_out);

/* Verdict JSON; for SHIFTSPEC_ROUTE_BOTH a consistency report whose
 * decision is the geometric one. json_out may be NULL. */
SHIFTSPEC_API shiftspec_status shiftspec_decide(const shiftspec_instance* inst, shiftspec_route route,
                                                shiftspec_decision* decision, char** json_out);

/* Mixing witness for the target vector (JSON, NULL for all ones of the
 * truncation length). *ok is 1 when every stage met its decay bound and
 * step residual. csv_out may be NULL. */
SHIFTSPEC_API shiftspec_status shiftspec_simulate(const shiftspec_instance* inst, const char* target_json,
                                                  unsigned stages, int* ok, char** witness_json,
                                                  char** csv_out);

/* J-set experiment for the vector x against one target (NULL: all ones).
 * envelope_csv may be NULL and stays empty for decaying x. */
SHIFTSPEC_API shiftspec_status shiftspec_jset(const shiftspec_instance* inst, const char* x_json,
                                              const char* target_json, uint64_t seed,
                                              char** report_json, char** envelope_csv);

/* Static SVG of the annulus, its images under f and the unit circle. */
SHIFTSPEC_API shiftspec_status shiftspec_plot(const shiftspec_instance* inst, char** svg_out);

SHIFTSPEC_API void shiftspec_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SHIFTSPEC_SHIFTSPEC_H */
