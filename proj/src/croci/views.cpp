#include "croci/views.hpp"

namespace croci {

using nlohmann::json;

namespace {

json optional_date(const std::optional<PartialDate>& date) {
  return date ? json(date->to_string()) : json(nullptr);
}

}  // namespace

json citation_view(const StoredCitation& c) {
  const Provenance& accepted = c.provenance.front();
  return json{
      {"citing", format_doi_url(c.key.citing)},
      {"cited", format_doi_url(c.key.cited)},
      {"citing_date", optional_date(c.citing_date)},
      {"cited_date", optional_date(c.cited_date)},
      {"timespan", c.timespan ? json(c.timespan->to_iso8601()) : json(nullptr)},
      {"submitter", accepted.submitter.value()},
      {"archive_ref", accepted.archive_ref},
  };
}

json citation_list_view(const std::vector<StoredCitation>& citations) {
  json out = json::array();
  for (const auto& c : citations) out.push_back(citation_view(c));
  return out;
}

json row_error_view(const RowError& e) {
  return json{{"row", e.row},
              {"line", e.line},
              {"code", std::string(to_string(e.code))},
              {"message", e.message}};
}

json ingest_report_view(const IngestReport& r) {
  json breakdown = json::object();
  for (const auto& [code, n] : r.error_breakdown) breakdown[std::string(to_string(code))] = n;
  json errors = json::array();
  for (const auto& e : r.row_errors) errors.push_back(row_error_view(e));
  return json{{"archive_ref", r.archive_ref},
              {"added", r.added},
              {"duplicates_ignored", r.duplicates_ignored},
              {"errors", r.errors},
              {"date_conflicts", r.date_conflicts},
              {"error_breakdown", breakdown},
              {"row_errors", errors}};
}

json parsed_rows_view(const ParsedRows& rows) {
  json errors = json::array();
  for (const auto& e : rows.row_errors) errors.push_back(row_error_view(e));
  return json{{"records", rows.records.size()}, {"errors", rows.row_errors.size()},
              {"row_errors", errors}};
}

json error_view(ErrorCode code, const std::string& message) {
  return json{{"error", std::string(to_string(code))}, {"message", message}};
}

}  // namespace croci
