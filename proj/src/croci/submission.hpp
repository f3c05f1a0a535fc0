#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "croci/doi.hpp"
#include "croci/error.hpp"
#include "croci/orcid.hpp"
#include "croci/partial_date.hpp"

namespace croci {

using Timestamp = std::chrono::sys_seconds;

Timestamp now_utc();

/// One directed citation as submitted: citing -> cited, dates optional.
struct CitationRecord {
  Doi citing;
  Doi cited;
  std::optional<PartialDate> citing_date;
  std::optional<PartialDate> cited_date;

  friend bool operator==(const CitationRecord&, const CitationRecord&) = default;
};

/// Builds a record, enforcing citing != cited.
/// Throws Error(kSelfCitation).
CitationRecord make_citation_record(Doi citing, Doi cited,
                                    std::optional<PartialDate> citing_date,
                                    std::optional<PartialDate> cited_date);

// Diagnostic for one rejected source row (CSV) or entry (Scholix).
// `row` is the 1-based ordinal among non-empty data rows / list entries.
struct RowError {
  std::size_t row = 0;
  std::size_t line = 0;  // CSV physical line; 0 for Scholix
  ErrorCode code{};
  std::string message;
};

enum class SourceFormat { kCsv, kScholix };

std::string_view to_string(SourceFormat format);
/// "csv" or "scholix"; throws Error(kInvalidArgument).
SourceFormat parse_source_format(std::string_view text);

struct ParsedRows {
  std::vector<CitationRecord> records;
  std::vector<RowError> row_errors;

  std::size_t input_rows() const { return records.size() + row_errors.size(); }
};

struct SubmissionBatch {
  std::vector<CitationRecord> records;
  Orcid submitter;
  std::string archive_ref;
  Timestamp received_at;
  SourceFormat source_format = SourceFormat::kCsv;
  std::vector<RowError> row_errors;

  std::size_t input_rows() const { return records.size() + row_errors.size(); }
};

inline constexpr std::string_view kCsvColumns[] = {
    "citing_id", "citing_publication_date", "cited_id", "cited_publication_date"};

/// Row-level CSV parse. File-level problems throw Error(kMissingHeader) or
/// Error(kWrongColumnCount); bad rows become RowErrors.
ParsedRows parse_csv_rows(std::string_view content);

/// Entry-level Scholix parse. A document that is not a JSON list throws
/// Error(kMalformedDocument).
ParsedRows parse_scholix_rows(std::string_view content);

SubmissionBatch parse_csv_submission(std::string_view content, Orcid submitter,
                                     std::string archive_ref,
                                     Timestamp received_at = now_utc());
SubmissionBatch parse_scholix_submission(std::string_view content, Orcid submitter,
                                         std::string archive_ref,
                                         Timestamp received_at = now_utc());
SubmissionBatch parse_submission(std::string_view content, SourceFormat format,
                                 Orcid submitter, std::string archive_ref,
                                 Timestamp received_at);

/// "2019-01-24T00:00:00Z".
std::string format_timestamp(Timestamp t);

}  // namespace croci
