#include "croci/croci.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "croci/citation_index.hpp"
#include "croci/coverage.hpp"
#include "croci/error.hpp"
#include "croci/registry.hpp"
#include "croci/service.hpp"
#include "croci/views.hpp"

struct croci_index {
  std::unique_ptr<croci::CitationIndex> impl;
};

struct croci_registry {
  std::unique_ptr<croci::RegistryClient> impl;
};

struct croci_service {
  std::unique_ptr<croci::Service> impl;
  int port = 0;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

croci_status status_of(croci::ErrorCode code) {
  return static_cast<croci_status>(static_cast<int>(code));
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs `fn`, translating exceptions into status codes and the thread's
// last-error message.
template <typename Fn>
croci_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return CROCI_OK;
  } catch (const croci::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CROCI_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return CROCI_E_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) {
    throw croci::Error(croci::ErrorCode::kInvalidArgument,
                       std::string(what) + " must not be NULL");
  }
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw croci::Error(croci::ErrorCode::kInvalidArgument,
                       std::string("cannot read '") + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

croci::SourceFormat to_format(croci_format format) {
  switch (format) {
    case CROCI_FORMAT_CSV: return croci::SourceFormat::kCsv;
    case CROCI_FORMAT_SCHOLIX: return croci::SourceFormat::kScholix;
  }
  throw croci::Error(croci::ErrorCode::kInvalidArgument, "unknown format");
}

croci::TypeCategoryMap type_map(const char* path) {
  return path && *path ? croci::TypeCategoryMap::load(path)
                       : croci::TypeCategoryMap::defaults();
}

}  // namespace

extern "C" {

const char* croci_version(void) { return "0.1.0"; }

const char* croci_last_error(void) { return g_last_error.c_str(); }

const char* croci_status_name(croci_status status) {
  if (status == CROCI_OK) return "Ok";
  if (status == CROCI_E_INTERNAL) return "Internal";
  if (status >= CROCI_E_MALFORMED_DOI && status <= CROCI_E_INVALID_ARGUMENT) {
    return croci::to_string(static_cast<croci::ErrorCode>(status)).data();
  }
  return "Unknown";
}

void croci_string_free(char* s) { std::free(s); }

croci_status croci_normalize_doi(const char* raw, char** canonical) {
  return guarded([&] {
    require(raw, "raw");
    require(canonical, "canonical");
    *canonical = dup_string(croci::normalize_doi(raw).canonical());
  });
}

croci_status croci_doi_url(const char* raw, char** url) {
  return guarded([&] {
    require(raw, "raw");
    require(url, "url");
    *url = dup_string(croci::format_doi_url(croci::normalize_doi(raw)));
  });
}

croci_status croci_validate_orcid(const char* raw, char** orcid) {
  return guarded([&] {
    require(raw, "raw");
    require(orcid, "orcid");
    *orcid = dup_string(croci::validate_orcid(raw).value());
  });
}

croci_status croci_validate_submission(const char* data, size_t len, croci_format format,
                                       char** report_json) {
  return guarded([&] {
    require(data, "data");
    require(report_json, "report_json");
    std::string_view content(data, len);
    auto rows = to_format(format) == croci::SourceFormat::kCsv
                    ? croci::parse_csv_rows(content)
                    : croci::parse_scholix_rows(content);
    *report_json = dup_string(croci::parsed_rows_view(rows).dump());
  });
}

croci_status croci_index_open(const char* path, croci_index** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    auto index = std::make_unique<croci_index>();
    index->impl = croci::CitationIndex::open(path ? path : "");
    *out = index.release();
  });
}

void croci_index_close(croci_index* index) { delete index; }

croci_status croci_index_ingest(croci_index* index, const char* data, size_t len,
                                croci_format format, const char* orcid,
                                const char* archive_ref, int64_t received_at,
                                char** report_json) {
  return guarded([&] {
    require(index, "index");
    require(data, "data");
    require(orcid, "orcid");
    require(archive_ref, "archive_ref");
    require(report_json, "report_json");
    if (!*archive_ref) {
      throw croci::Error(croci::ErrorCode::kInvalidArgument, "archive_ref is empty");
    }
    croci::Timestamp when = received_at == 0
                                ? croci::now_utc()
                                : croci::Timestamp(std::chrono::seconds(received_at));
    auto batch = croci::parse_submission(std::string_view(data, len), to_format(format),
                                         croci::validate_orcid(orcid), archive_ref, when);
    auto report = index->impl->ingest_batch(batch);
    *report_json = dup_string(croci::ingest_report_view(report).dump());
  });
}

croci_status croci_index_complete_dates(croci_index* index, croci_registry* registry,
                                        const char* dois_json, char** summary_json) {
  return guarded([&] {
    require(index, "index");
    require(registry, "registry");
    require(summary_json, "summary_json");
    std::optional<std::set<croci::Doi>> only;
    if (dois_json) {
      json list = json::parse(dois_json, nullptr, false);
      if (list.is_discarded() || !list.is_array()) {
        throw croci::Error(croci::ErrorCode::kInvalidArgument,
                           "dois_json must be a JSON list of strings");
      }
      only.emplace();
      for (const auto& item : list) {
        if (!item.is_string()) {
          throw croci::Error(croci::ErrorCode::kInvalidArgument,
                             "dois_json must be a JSON list of strings");
        }
        only->insert(croci::normalize_doi(item.get<std::string>()));
      }
    }
    croci::RegistryDateSource source(*registry->impl);
    std::size_t examined = 0, updated = 0, incomplete = 0;
    for (const auto& key : index->impl->incomplete_keys()) {
      if (only && !only->contains(key.citing) && !only->contains(key.cited)) continue;
      ++examined;
      auto result = index->impl->complete_dates(key, source);
      if (result.changed) ++updated;
      if (!result.complete) ++incomplete;
    }
    *summary_json = dup_string(
        json{{"examined", examined}, {"updated", updated}, {"incomplete", incomplete}}.dump());
  });
}

croci_status croci_index_count(const croci_index* index, const char* doi,
                               croci_direction direction, uint64_t* count) {
  return guarded([&] {
    require(index, "index");
    require(doi, "doi");
    require(count, "count");
    croci::Doi d = croci::normalize_doi(doi);
    *count = direction == CROCI_CITATIONS ? index->impl->citation_count(d)
                                          : index->impl->reference_count(d);
  });
}

croci_status croci_index_list(const croci_index* index, const char* doi,
                              croci_direction direction, char** citations_json) {
  return guarded([&] {
    require(index, "index");
    require(doi, "doi");
    require(citations_json, "citations_json");
    croci::Doi d = croci::normalize_doi(doi);
    auto list = direction == CROCI_CITATIONS ? index->impl->get_citations(d)
                                             : index->impl->get_references(d);
    *citations_json = dup_string(croci::citation_list_view(list).dump());
  });
}

croci_status croci_index_size(const croci_index* index, uint64_t* count) {
  return guarded([&] {
    require(index, "index");
    require(count, "count");
    *count = index->impl->size();
  });
}

croci_status croci_index_export(const croci_index* index, const char* path, uint64_t* rows) {
  return guarded([&] {
    require(index, "index");
    require(path, "path");
    auto stats = index->impl->export_dump(std::filesystem::path(path));
    if (rows) *rows = stats.rows;
  });
}

croci_status croci_index_import_dump(croci_index* index, const char* path,
                                     char** report_json) {
  return guarded([&] {
    require(index, "index");
    require(path, "path");
    require(report_json, "report_json");
    auto report = index->impl->import_dump(read_file(path), croci::now_utc());
    *report_json = dup_string(croci::ingest_report_view(report).dump());
  });
}

croci_status croci_registry_open_fixtures(const char* dir, const char* type_map_path,
                                          croci_registry** out) {
  return guarded([&] {
    require(dir, "dir");
    require(out, "out");
    *out = nullptr;
    if (!std::filesystem::is_directory(dir)) {
      throw croci::Error(croci::ErrorCode::kInvalidArgument,
                         std::string("fixture directory '") + dir + "' does not exist");
    }
    croci::RegistryOptions options;
    options.rate_per_second = 0;
    auto registry = std::make_unique<croci_registry>();
    registry->impl = std::make_unique<croci::RegistryClient>(
        croci::make_fixture_transport(dir), options, type_map(type_map_path));
    *out = registry.release();
  });
}

croci_status croci_registry_open_http(const char* base_url, double rate_per_second,
                                      const char* type_map_path, croci_registry** out) {
  return guarded([&] {
    require(base_url, "base_url");
    require(out, "out");
    *out = nullptr;
    croci::RegistryOptions options;
    options.rate_per_second = rate_per_second;
    auto registry = std::make_unique<croci_registry>();
    registry->impl = std::make_unique<croci::RegistryClient>(
        croci::make_http_transport(base_url), options, type_map(type_map_path));
    *out = registry.release();
  });
}

void croci_registry_close(croci_registry* registry) { delete registry; }

croci_status croci_registry_request_count(const croci_registry* registry, uint64_t* count) {
  return guarded([&] {
    require(registry, "registry");
    require(count, "count");
    *count = registry->impl->request_count();
  });
}

croci_status croci_analyze(const croci_index* index, croci_registry* registry,
                           const char* corpus_path, const char* participation_path,
                           const char* out_dir, uint32_t top_n, char** summary_json) {
  return guarded([&] {
    require(index, "index");
    require(registry, "registry");
    require(corpus_path, "corpus_path");
    require(out_dir, "out_dir");
    require(summary_json, "summary_json");
    auto corpus = croci::parse_corpus(read_file(corpus_path));
    std::vector<croci::ParticipationCounts> participation;
    if (participation_path && *participation_path) {
      participation = croci::parse_participation_counts(read_file(participation_path));
    }
    auto s = croci::run_analysis(*index->impl, *registry->impl, corpus, participation,
                                 top_n, out_dir);
    json mean = s.mean_references_per_citing ? json(*s.mean_references_per_citing)
                                             : json(nullptr);
    *summary_json = dup_string(json{
        {"corpus_dois", s.corpus_dois},
        {"rows_with_metadata", s.rows_with_metadata},
        {"rows_without_metadata", s.rows_without_metadata},
        {"clamped_rows", s.clamped_rows},
        {"zero_open_some_closed", s.gaps.zero_open_some_closed},
        {"zero_closed_some_open", s.gaps.zero_closed_some_open},
        {"total_citations", s.total_citations},
        {"citing_entities", s.citing_entities},
        {"mean_references_per_citing", mean},
    }.dump());
  });
}

croci_status croci_service_start(croci_index* index, const char* host, int port,
                                 uint64_t max_upload_bytes, croci_service** out) {
  return guarded([&] {
    require(index, "index");
    require(host, "host");
    require(out, "out");
    *out = nullptr;
    croci::ServiceOptions options;
    if (max_upload_bytes > 0) options.max_upload_bytes = max_upload_bytes;
    auto service = std::make_unique<croci_service>();
    service->impl = std::make_unique<croci::Service>(*index->impl, options);
    service->port = service->impl->start(host, port);
    *out = service.release();
  });
}

int croci_service_port(const croci_service* service) { return service ? service->port : -1; }

void croci_service_stop(croci_service* service) { delete service; }

}  // extern "C"
