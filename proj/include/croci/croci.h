/*
 * croci: crowdsourced open-citation index engine, C interface.
 *
 * All handles are opaque. Every function returns a croci_status; on failure
 * croci_last_error() holds a message for the calling thread until its next
 * call into the library. Strings returned through `char**` out-parameters
 * are owned by the caller and released with croci_string_free().
 * Structured results (reports, citation lists) are JSON documents.
 */
#ifndef CROCI_CROCI_H
#define CROCI_CROCI_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CROCI_BUILDING_LIBRARY)
#    define CROCI_API __declspec(dllexport)
#  else
#    define CROCI_API __declspec(dllimport)
#  endif
#else
#  define CROCI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum croci_status {
  CROCI_OK = 0,
  CROCI_E_MALFORMED_DOI = 1,
  CROCI_E_MALFORMED_DATE = 2,
  CROCI_E_MALFORMED_ORCID = 3,
  CROCI_E_ORCID_CHECKSUM = 4,
  CROCI_E_MISSING_HEADER = 5,
  CROCI_E_WRONG_COLUMN_COUNT = 6,
  CROCI_E_SELF_CITATION = 7,
  CROCI_E_MALFORMED_DOCUMENT = 8,
  CROCI_E_MISSING_DOI_IDENTIFIER = 9,
  CROCI_E_UNSUPPORTED_RELATION = 10,
  CROCI_E_MALFORMED_ENTRY = 11,
  CROCI_E_STORAGE = 12,
  CROCI_E_WRITE = 13,
  CROCI_E_UNKNOWN_CITATION = 14,
  CROCI_E_REGISTRY_UNAVAILABLE = 15,
  CROCI_E_INVALID_COUNTS = 16,
  CROCI_E_INVALID_ARGUMENT = 17,
  CROCI_E_INTERNAL = 100
} croci_status;

typedef enum croci_format {
  CROCI_FORMAT_CSV = 0,
  CROCI_FORMAT_SCHOLIX = 1
} croci_format;

typedef enum croci_direction {
  CROCI_CITATIONS = 0, /* incoming: the DOI is cited */
  CROCI_REFERENCES = 1 /* outgoing: the DOI is citing */
} croci_direction;

typedef struct croci_index croci_index;
typedef struct croci_registry croci_registry;
typedef struct croci_service croci_service;

CROCI_API const char* croci_version(void);
CROCI_API const char* croci_last_error(void);
CROCI_API const char* croci_status_name(croci_status status);
CROCI_API void croci_string_free(char* s);

/* Identifiers */
CROCI_API croci_status croci_normalize_doi(const char* raw, char** canonical);
CROCI_API croci_status croci_doi_url(const char* raw, char** url);
CROCI_API croci_status croci_validate_orcid(const char* raw, char** orcid);

/* Parses a submission without storing it. `report_json` receives
 * {"records": n, "errors": n, "row_errors": [...]} when the file-level
 * structure is valid. */
CROCI_API croci_status croci_validate_submission(const char* data, size_t len,
                                                 croci_format format,
                                                 char** report_json);

/* Index. A NULL, empty or ":memory:" path opens an in-memory index. */
CROCI_API croci_status croci_index_open(const char* path, croci_index** out);
CROCI_API void croci_index_close(croci_index* index);

/* Parses and ingests one submission. `received_at` is Unix seconds (0 means
 * now). On success `report_json` receives the ingest report; a file-level
 * parse error returns its status and leaves the index unchanged. */
CROCI_API croci_status croci_index_ingest(croci_index* index, const char* data,
                                          size_t len, croci_format format,
                                          const char* orcid, const char* archive_ref,
                                          int64_t received_at, char** report_json);

/* Fills absent dates from the registry for every stored citation that
 * involves one of the DOIs in `dois_json` (a JSON list of DOI strings), or
 * for all incomplete citations when `dois_json` is NULL. `summary_json`
 * receives {"examined", "updated", "incomplete"}. */
CROCI_API croci_status croci_index_complete_dates(croci_index* index,
                                                  croci_registry* registry,
                                                  const char* dois_json,
                                                  char** summary_json);

CROCI_API croci_status croci_index_count(const croci_index* index, const char* doi,
                                         croci_direction direction, uint64_t* count);
CROCI_API croci_status croci_index_list(const croci_index* index, const char* doi,
                                        croci_direction direction, char** citations_json);
CROCI_API croci_status croci_index_size(const croci_index* index, uint64_t* count);

/* Writes the CC0 dump. `rows` may be NULL. */
CROCI_API croci_status croci_index_export(const croci_index* index, const char* path,
                                          uint64_t* rows);
/* Loads a dump written by croci_index_export, keeping its provenance columns. */
CROCI_API croci_status croci_index_import_dump(croci_index* index, const char* path,
                                               char** report_json);

/* Registry. Fixture mode reads a directory; HTTP mode talks to `base_url`.
 * `rate_per_second` <= 0 disables throttling. `type_map_path` may be NULL
 * for the built-in type/category map. */
CROCI_API croci_status croci_registry_open_fixtures(const char* dir,
                                                    const char* type_map_path,
                                                    croci_registry** out);
CROCI_API croci_status croci_registry_open_http(const char* base_url,
                                                double rate_per_second,
                                                const char* type_map_path,
                                                croci_registry** out);
CROCI_API void croci_registry_close(croci_registry* registry);
CROCI_API croci_status croci_registry_request_count(const croci_registry* registry,
                                                    uint64_t* count);

/* Coverage analysis over a newline-delimited DOI list. Writes
 * category_totals.csv, publisher_ranking.csv and participation.csv into
 * `out_dir`. `participation_path` (publisher, closed_refs, limited_refs,
 * open_refs, total_deposits) may be NULL. `summary_json` receives row
 * counts, gap populations and the mean references per citing entity. */
CROCI_API croci_status croci_analyze(const croci_index* index, croci_registry* registry,
                                     const char* corpus_path,
                                     const char* participation_path,
                                     const char* out_dir, uint32_t top_n,
                                     char** summary_json);

/* REST service. Port 0 picks a free port; the bound port is reported
 * through croci_service_port(). The index must outlive the service. */
CROCI_API croci_status croci_service_start(croci_index* index, const char* host, int port,
                                           uint64_t max_upload_bytes,
                                           croci_service** out);
CROCI_API int croci_service_port(const croci_service* service);
CROCI_API void croci_service_stop(croci_service* service);

#ifdef __cplusplus
}
#endif

#endif /* CROCI_CROCI_H */
