/*
 * wphorder C interface.
 *
 * Families are opaque handles. Every call returns a wph_status; on failure a
 * message is available from wph_last_error() until the next call on the same
 * thread. Strings handed out by the library are freed with wph_string_free().
 */
#ifndef WPH_WPH_H
#define WPH_WPH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(WPH_BUILDING)
#    define WPH_API __declspec(dllexport)
#  else
#    define WPH_API __declspec(dllimport)
#  endif
#else
#  define WPH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wph_status {
    WPH_OK = 0,
    WPH_E_USAGE = 1,            /* null pointer or out-of-range argument */
    WPH_E_PARSE = 2,            /* unparsable family text */
    WPH_E_HYPOTHESIS = 3,       /* invalid family or violated precondition */
    WPH_E_BUDGET = 4,           /* a search budget ran out */
    WPH_E_NOT_NORMALIZABLE = 5,
    WPH_E_NOT_PRIME_POWER = 6,
    WPH_E_INTERNAL = 7
} wph_status;

/* Outcome of a report, mirrors the CLI exit codes 0/1/2. */
typedef enum wph_outcome {
    WPH_OUTCOME_OK = 0,
    WPH_OUTCOME_HYPOTHESIS = 1,
    WPH_OUTCOME_BUDGET = 2
} wph_outcome;

typedef struct wph_family wph_family;

typedef struct wph_options {
    uint64_t seed;
    uint64_t oracle_budget;   /* signature classes */
    uint64_t monomial_budget;
    uint64_t cycle_budget;
    uint64_t max_order;       /* 0: derived from the bounds */
    int all_chains;
    int explain;
    int timings;
    int indent;               /* JSON indentation, -1 for one line */
} wph_options;

WPH_API void wph_options_default(wph_options* opts);

WPH_API wph_status wph_family_new(const int64_t* weights, size_t count, int64_t degree,
                                  wph_family** out);
/* Accepts "3,7,2,4,5 d=37". */
WPH_API wph_status wph_family_parse(const char* text, wph_family** out);
WPH_API void wph_family_free(wph_family* fam);

WPH_API size_t wph_family_size(const wph_family* fam);
WPH_API int64_t wph_family_weight(const wph_family* fam, size_t i);
WPH_API int64_t wph_family_degree(const wph_family* fam);

WPH_API int wph_family_well_formed(const wph_family* fam);
WPH_API int wph_family_mm_hypothesis(const wph_family* fam);
WPH_API int wph_family_lin_finite(const wph_family* fam);
WPH_API int wph_family_linear_cone(const wph_family* fam);
/* 1 or 0; -1 with WPH_E_HYPOTHESIS pending when the family is not well-formed. */
WPH_API int wph_family_quasismooth_exists(const wph_family* fam);

WPH_API wph_status wph_family_normalize(const wph_family* fam, wph_family** out);

/* Reports are JSON documents; *json is owned by the caller. */
WPH_API wph_status wph_orders_report(const wph_family* fam, const wph_options* opts,
                                     char** json, wph_outcome* outcome);
WPH_API wph_status wph_check_report(const wph_family* fam, uint64_t q, const wph_options* opts,
                                    char** json, wph_outcome* outcome);
WPH_API wph_status wph_klein_report(const wph_family* fam, const wph_options* opts, char** json);

WPH_API void wph_string_free(char* s);

WPH_API int wph_is_prime(uint64_t n);
WPH_API const char* wph_last_error(void);
WPH_API const char* wph_version(void);
WPH_API const char* wph_status_string(wph_status status);

/* Acceptance suite. */
WPH_API size_t wph_suite_size(void);
WPH_API const char* wph_suite_name(size_t index);
WPH_API const char* wph_suite_description(size_t index);
/* *passed receives 1 or 0; *detail (may be null) receives a summary string. */
WPH_API wph_status wph_suite_run(size_t index, int inject, int* passed, double* seconds,
                                 char** detail);

#ifdef __cplusplus
}
#endif

#endif
