#include "croci/submission.hpp"

#include <ctime>

#include <json.hpp>

#include "croci/csv.hpp"

namespace croci {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<PartialDate> optional_date(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  return parse_partial_date(cell);
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto lower = [](char c) { return (c >= 'A' && c <= 'Z') ? char(c + 32) : c; };
    if (lower(a[i]) != lower(b[i])) return false;
  }
  return true;
}

// Leading "yyyy-mm-dd" / "yyyy-mm" / "yyyy" portion of a timestamp-ish text.
std::string_view leading_date(std::string_view text) {
  if (text.size() >= 10 && text[4] == '-' && text[7] == '-') return text.substr(0, 10);
  if (text.size() >= 7 && text[4] == '-') return text.substr(0, 7);
  return text.substr(0, 4);
}

struct EntryFailure {
  ErrorCode code;
  std::string message;
};

const json* member(const json& object, const char* key) {
  auto it = object.find(key);
  return it == object.end() ? nullptr : &*it;
}

std::string scholix_doi(const json& node, const char* role) {
  const json* ids = member(node, "Identifier");
  if (ids) {
    auto check = [](const json& id) -> const std::string* {
      if (!id.is_object()) return nullptr;
      const json* scheme = member(id, "IDScheme");
      const json* value = member(id, "ID");
      if (scheme && scheme->is_string() && value && value->is_string() &&
          iequals(scheme->get_ref<const std::string&>(), "doi")) {
        return &value->get_ref<const std::string&>();
      }
      return nullptr;
    };
    if (ids->is_array()) {
      for (const auto& id : *ids) {
        if (auto* found = check(id)) return *found;
      }
    } else if (auto* found = check(*ids)) {
      return *found;
    }
  }
  throw EntryFailure{ErrorCode::kMissingDoiIdentifier,
                     std::string(role) + " has no identifier with IDScheme \"doi\""};
}

std::optional<PartialDate> scholix_date(const json& node) {
  const json* date = member(node, "PublicationDate");
  if (!date || date->is_null()) return std::nullopt;
  if (!date->is_string()) {
    throw Error(ErrorCode::kMalformedDate, "PublicationDate is not a string");
  }
  return optional_date(leading_date(trim(date->get_ref<const std::string&>())));
}

CitationRecord scholix_record(const json& link) {
  if (!link.is_object()) {
    throw EntryFailure{ErrorCode::kMalformedEntry, "link is not an object"};
  }
  const json* relation = member(link, "RelationshipType");
  std::string name;
  if (relation && relation->is_object()) {
    const json* n = member(*relation, "Name");
    if (n && n->is_string()) name = n->get<std::string>();
  } else if (relation && relation->is_string()) {
    name = relation->get<std::string>();
  }
  if (!iequals(name, "References")) {
    throw EntryFailure{ErrorCode::kUnsupportedRelation,
                       "unsupported relationship type '" + name + "'"};
  }
  const json* source = member(link, "Source");
  const json* target = member(link, "Target");
  if (!source || !source->is_object() || !target || !target->is_object()) {
    throw EntryFailure{ErrorCode::kMalformedEntry, "link lacks Source or Target object"};
  }
  Doi citing = normalize_doi(scholix_doi(*source, "Source"));
  Doi cited = normalize_doi(scholix_doi(*target, "Target"));
  if (citing == cited) {
    throw Error(ErrorCode::kSelfCitation, "self-citation of " + citing.canonical());
  }
  return make_citation_record(std::move(citing), std::move(cited),
                              scholix_date(*source), scholix_date(*target));
}

SubmissionBatch to_batch(ParsedRows rows, SourceFormat format, Orcid submitter,
                         std::string archive_ref, Timestamp received_at) {
  return SubmissionBatch{std::move(rows.records), std::move(submitter),
                         std::move(archive_ref),  received_at,
                         format,                  std::move(rows.row_errors)};
}

}  // namespace

CitationRecord make_citation_record(Doi citing, Doi cited,
                                    std::optional<PartialDate> citing_date,
                                    std::optional<PartialDate> cited_date) {
  if (citing == cited) {
    throw Error(ErrorCode::kSelfCitation, "self-citation of " + citing.canonical());
  }
  return CitationRecord{std::move(citing), std::move(cited), citing_date, cited_date};
}

std::string_view to_string(SourceFormat format) {
  return format == SourceFormat::kCsv ? "csv" : "scholix";
}

SourceFormat parse_source_format(std::string_view text) {
  if (iequals(text, "csv")) return SourceFormat::kCsv;
  if (iequals(text, "scholix")) return SourceFormat::kScholix;
  throw Error(ErrorCode::kInvalidArgument, "unknown format '" + std::string(text) + "'");
}

ParsedRows parse_csv_rows(std::string_view content) {
  if (content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);
  std::vector<csv::Row> rows = csv::read(content);

  std::size_t i = 0;
  while (i < rows.size() && csv::is_blank(rows[i])) ++i;
  if (i == rows.size()) throw Error(ErrorCode::kMissingHeader, "empty submission");

  const csv::Row& header = rows[i];
  if (header.fields.size() != std::size(kCsvColumns)) {
    throw Error(ErrorCode::kWrongColumnCount,
                "header has " + std::to_string(header.fields.size()) +
                    " columns, expected 4");
  }
  for (std::size_t c = 0; c < header.fields.size(); ++c) {
    if (trim(header.fields[c]) != kCsvColumns[c]) {
      throw Error(ErrorCode::kMissingHeader,
                  "expected header citing_id,citing_publication_date,cited_id,"
                  "cited_publication_date");
    }
  }

  ParsedRows out;
  std::size_t ordinal = 0;
  for (++i; i < rows.size(); ++i) {
    const csv::Row& row = rows[i];
    if (csv::is_blank(row)) continue;
    ++ordinal;
    if (row.fields.size() != 4) {
      out.row_errors.push_back({ordinal, row.line, ErrorCode::kWrongColumnCount,
                                "expected 4 columns, got " +
                                    std::to_string(row.fields.size())});
      continue;
    }
    try {
      Doi citing = normalize_doi(row.fields[0]);
      Doi cited = normalize_doi(row.fields[2]);
      if (citing == cited) {
        throw Error(ErrorCode::kSelfCitation, "self-citation of " + citing.canonical());
      }
      out.records.push_back(make_citation_record(std::move(citing), std::move(cited),
                                                 optional_date(row.fields[1]),
                                                 optional_date(row.fields[3])));
    } catch (const Error& e) {
      out.row_errors.push_back({ordinal, row.line, e.code(), e.what()});
    }
  }
  return out;
}

ParsedRows parse_scholix_rows(std::string_view content) {
  if (content.substr(0, 3) == "\xEF\xBB\xBF") content.remove_prefix(3);
  json doc = json::parse(content, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_array()) {
    throw Error(ErrorCode::kMalformedDocument,
                "Scholix submission must be a JSON list of link objects");
  }
  ParsedRows out;
  std::size_t ordinal = 0;
  for (const auto& link : doc) {
    ++ordinal;
    try {
      out.records.push_back(scholix_record(link));
    } catch (const EntryFailure& f) {
      out.row_errors.push_back({ordinal, 0, f.code, f.message});
    } catch (const Error& e) {
      out.row_errors.push_back({ordinal, 0, e.code(), e.what()});
    }
  }
  return out;
}

SubmissionBatch parse_csv_submission(std::string_view content, Orcid submitter,
                                     std::string archive_ref, Timestamp received_at) {
  return to_batch(parse_csv_rows(content), SourceFormat::kCsv, std::move(submitter),
                  std::move(archive_ref), received_at);
}

SubmissionBatch parse_scholix_submission(std::string_view content, Orcid submitter,
                                         std::string archive_ref,
                                         Timestamp received_at) {
  return to_batch(parse_scholix_rows(content), SourceFormat::kScholix,
                  std::move(submitter), std::move(archive_ref), received_at);
}

SubmissionBatch parse_submission(std::string_view content, SourceFormat format,
                                 Orcid submitter, std::string archive_ref,
                                 Timestamp received_at) {
  return format == SourceFormat::kCsv
             ? parse_csv_submission(content, std::move(submitter),
                                    std::move(archive_ref), received_at)
             : parse_scholix_submission(content, std::move(submitter),
                                        std::move(archive_ref), received_at);
}

Timestamp now_utc() {
  return std::chrono::time_point_cast<std::chrono::seconds>(
      std::chrono::system_clock::now());
}

std::string format_timestamp(Timestamp t) {
  std::time_t raw = std::chrono::system_clock::to_time_t(t);
  std::tm parts{};
  gmtime_r(&raw, &parts);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &parts);
  return buf;
}

}  // namespace croci
