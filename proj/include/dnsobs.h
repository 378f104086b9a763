/* dnsobs C API: everything the toolkit can do, behind opaque handles.
 *
 * Conventions:
 *   - Every fallible call returns a dnsobs_status; DNSOBS_OK is 0.
 *   - Results come back through out-parameters. Strings are heap-allocated
 *     by the library and must be released with dnsobs_string_free().
 *   - When err_out is non-NULL and a call fails, *err_out receives a
 *     human-readable message (release with dnsobs_string_free()).
 *   - Handles are created and destroyed by the matching *_free() call only.
 */
#ifndef DNSOBS_H
#define DNSOBS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dnsobs_status {
  DNSOBS_OK = 0,
  DNSOBS_ERR_INVALID_ARGUMENT = 1, /* bad parameter value or misuse */
  DNSOBS_ERR_PARSE = 2,            /* malformed input text (CSV, JSON, config) */
  DNSOBS_ERR_DATA = 3,             /* structurally valid input the operation cannot use */
  DNSOBS_ERR_IO = 4,
  DNSOBS_ERR_INTERNAL = 5,
} dnsobs_status;

const char* dnsobs_status_name(dnsobs_status status);

const char* dnsobs_version(void);        /* tool version, e.g. "1.0.0" */
const char* dnsobs_format_version(void); /* report/file format version */

void dnsobs_string_free(char* s);

/* ---- session stores ---------------------------------------------------- */

typedef struct dnsobs_store dnsobs_store;

dnsobs_status dnsobs_store_from_json(const char* json_text, dnsobs_store** store_out, char** err_out);
dnsobs_status dnsobs_store_to_json(const dnsobs_store* store, char** json_out, char** err_out);

/* Parses a query-log CSV and buckets it into epochs of epoch_seconds anchored
 * at origin_rfc3339 (NULL: midnight UTC of the first query). lenient != 0
 * skips malformed lines; parse_report_out (optional) reports them. */
dnsobs_status dnsobs_store_from_query_csv(const char* csv_text, int64_t epoch_seconds, const char* origin_rfc3339,
                                          int lenient, dnsobs_store** store_out, char** parse_report_out,
                                          char** err_out);

dnsobs_status dnsobs_store_stats(const dnsobs_store* store, char** json_out, char** err_out);
void dnsobs_store_free(dnsobs_store* store);

/* ---- synthetic workloads ------------------------------------------------ */

/* config_json: population config object (all keys optional, seeded).
 * query_csv_out (optional) receives the raw time-ordered query log. */
dnsobs_status dnsobs_synth_population(const char* config_json, dnsobs_store** store_out, char** query_csv_out,
                                      char** err_out);

typedef struct dnsobs_patterndb dnsobs_patterndb;

dnsobs_status dnsobs_synth_pattern_db(const char* config_json, dnsobs_patterndb** db_out, char** err_out);

/* ---- access-pattern databases ------------------------------------------ */

dnsobs_status dnsobs_patterndb_from_json(const char* json_text, dnsobs_patterndb** db_out, char** err_out);
dnsobs_status dnsobs_patterndb_to_json(const dnsobs_patterndb* db, char** json_out, char** err_out);

/* {unique_count, total, fraction_unique, duplicate_groups} */
dnsobs_status dnsobs_patterndb_uniqueness(const dnsobs_patterndb* db, char** report_out, char** err_out);

/* domains_json: JSON array of normalized domain strings. pages_out: JSON array
 * of the page ids whose complete pattern the observation contains. */
dnsobs_status dnsobs_patterndb_match(const dnsobs_patterndb* db, const char* domains_json, char** pages_out,
                                     char** err_out);

/* Sliding-window page-load detection over a query-log CSV. */
dnsobs_status dnsobs_patterndb_detect(const dnsobs_patterndb* db, const char* query_csv, int64_t window_seconds,
                                      char** events_out, char** err_out);

void dnsobs_patterndb_free(dnsobs_patterndb* db);

/* ---- behavioral linkage -------------------------------------------------- */

dnsobs_status dnsobs_link_evaluate(const dnsobs_store* store, double alpha, int threads, char** report_out,
                                   char** err_out);

/* Keeps the top_n globally most requested domains; report_out (optional)
 * receives {kept_domains, dropped_sessions}. */
dnsobs_status dnsobs_link_restrict(const dnsobs_store* store, int64_t top_n, dnsobs_store** restricted_out,
                                   char** report_out, char** err_out);

dnsobs_status dnsobs_link_sweep(const char* query_csv, const char* origin_rfc3339, const int64_t* epoch_seconds,
                                size_t n_durations, double alpha, int threads, char** report_out, char** err_out);

/* ---- range-query defenses ------------------------------------------------ */

/* strategy: "random" | "pattern_complete". The dummy pool is the database's
 * own domain universe. */
dnsobs_status dnsobs_rangequery_bench(const dnsobs_patterndb* db, const char* strategy, int64_t n_dummies,
                                      int64_t trials, uint64_t seed, int threads, char** report_out,
                                      char** err_out);

/* ---- push-service analysis ---------------------------------------------- */

dnsobs_status dnsobs_push_rank(const dnsobs_store* store, char** ranking_out, char** err_out);

/* csv_out: "k,aggregate_coverage,per_user_mean_coverage" rows, one per k. */
dnsobs_status dnsobs_push_coverage_csv(const dnsobs_store* store, const int64_t* ks, size_t n_ks, char** csv_out,
                                       char** err_out);

dnsobs_status dnsobs_push_bandwidth(int64_t k, int64_t record_size_bytes, double mean_change_interval_seconds,
                                    char** report_out, char** err_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DNSOBS_H */
