#pragma once

#include <json.hpp>

#include "croci/citation_index.hpp"
#include "croci/submission.hpp"

namespace croci {

// JSON shapes shared by the REST service and the C API.

/// Citation as exposed over the API: DOI URL forms, ISO partial dates,
/// ISO 8601 timespan, accepted provenance.
nlohmann::json citation_view(const StoredCitation& citation);
nlohmann::json citation_list_view(const std::vector<StoredCitation>& citations);
nlohmann::json row_error_view(const RowError& error);
nlohmann::json ingest_report_view(const IngestReport& report);
nlohmann::json parsed_rows_view(const ParsedRows& rows);
nlohmann::json error_view(ErrorCode code, const std::string& message);

}  // namespace croci
