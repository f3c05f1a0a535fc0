#include "croci/citation_index.hpp"

#include <fstream>
#include <system_error>
#include <unordered_map>

#include "croci/csv.hpp"
#include "croci/error.hpp"

namespace croci {

namespace {

std::string optional_text(const std::optional<PartialDate>& date) {
  return date ? date->to_string() : std::string();
}

void commit_or_fail(Store& store, const std::vector<StoredCitation>& upserts) {
  try {
    store.commit(upserts);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kStorageFailure) throw;
    throw Error(ErrorCode::kStorageFailure, e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kStorageFailure, e.what());
  }
}

}  // namespace

CitationIndex::CitationIndex(std::unique_ptr<Store> store) : store_(std::move(store)) {}

std::unique_ptr<CitationIndex> CitationIndex::open(const std::string& path) {
  if (path.empty() || path == ":memory:") {
    return std::make_unique<CitationIndex>(make_memory_store());
  }
  return std::make_unique<CitationIndex>(make_sqlite_store(path));
}

IngestReport CitationIndex::ingest_batch(const SubmissionBatch& batch) {
  std::lock_guard writer(writer_);

  IngestReport report;
  report.archive_ref = batch.archive_ref;
  report.errors = batch.row_errors.size();
  report.row_errors = batch.row_errors;
  for (const auto& e : batch.row_errors) ++report.error_breakdown[e.code];

  const Provenance provenance{batch.submitter, batch.archive_ref, batch.received_at};

  // Stage every touched citation; nothing reaches the store until commit.
  std::vector<StoredCitation> staged;
  std::map<CitationKey, std::size_t> staged_at;
  for (const auto& record : batch.records) {
    CitationKey key{record.citing, record.cited};
    StoredCitation* existing = nullptr;
    if (auto it = staged_at.find(key); it != staged_at.end()) {
      existing = &staged[it->second];
    } else if (auto found = store_->find(key)) {
      staged_at.emplace(key, staged.size());
      staged.push_back(std::move(*found));
      existing = &staged.back();
    }

    if (existing) {
      ++report.duplicates_ignored;
      if ((record.citing_date && record.citing_date != existing->citing_date) ||
          (record.cited_date && record.cited_date != existing->cited_date)) {
        ++report.date_conflicts;
      }
      existing->provenance.push_back(provenance);
      continue;
    }

    StoredCitation citation{key, record.citing_date, record.cited_date, std::nullopt,
                            {provenance}};
    refresh_timespan(citation);
    staged_at.emplace(std::move(key), staged.size());
    staged.push_back(std::move(citation));
    ++report.added;
  }

  if (!staged.empty()) {
    std::unique_lock state(state_);
    commit_or_fail(*store_, staged);
  }
  return report;
}

DateCompletion CitationIndex::complete_dates(const CitationKey& key,
                                             IssuedDateSource& source) {
  std::lock_guard writer(writer_);
  std::optional<StoredCitation> found;
  {
    std::shared_lock state(state_);
    found = store_->find(key);
  }
  if (!found) {
    throw Error(ErrorCode::kUnknownCitation,
                "no citation " + key.citing.canonical() + " -> " + key.cited.canonical());
  }

  DateCompletion result{std::move(*found)};
  StoredCitation& c = result.citation;
  if (!c.citing_date) {
    if (auto date = source.issued_date(key.citing)) {
      c.citing_date = date;
      result.changed = true;
    }
  }
  if (!c.cited_date) {
    if (auto date = source.issued_date(key.cited)) {
      c.cited_date = date;
      result.changed = true;
    }
  }
  result.complete = c.citing_date && c.cited_date;
  if (result.changed) {
    refresh_timespan(c);
    std::unique_lock state(state_);
    commit_or_fail(*store_, {c});
  }
  return result;
}

std::vector<StoredCitation> CitationIndex::get_references(const Doi& doi) const {
  std::shared_lock state(state_);
  return store_->outgoing(doi);
}

std::vector<StoredCitation> CitationIndex::get_citations(const Doi& doi) const {
  std::shared_lock state(state_);
  return store_->incoming(doi);
}

std::size_t CitationIndex::reference_count(const Doi& doi) const {
  std::shared_lock state(state_);
  return store_->count_outgoing(doi);
}

std::size_t CitationIndex::citation_count(const Doi& doi) const {
  std::shared_lock state(state_);
  return store_->count_incoming(doi);
}

std::optional<StoredCitation> CitationIndex::find(const CitationKey& key) const {
  std::shared_lock state(state_);
  return store_->find(key);
}

std::vector<CitationKey> CitationIndex::incomplete_keys() const {
  std::shared_lock state(state_);
  std::vector<CitationKey> keys;
  store_->for_each([&](const StoredCitation& c) {
    if (!c.citing_date || !c.cited_date) keys.push_back(c.key);
  });
  return keys;
}

std::size_t CitationIndex::size() const {
  std::shared_lock state(state_);
  return store_->size();
}

std::size_t CitationIndex::distinct_citing() const {
  std::shared_lock state(state_);
  return store_->distinct_citing();
}

ExportStats CitationIndex::export_dump(std::ostream& out) const {
  std::shared_lock state(state_);
  ExportStats stats;
  out << kDumpLicenseLine << '\n' << kDumpHeader << '\n';
  store_->for_each([&](const StoredCitation& c) {
    const Provenance& accepted = c.provenance.front();
    out << csv::join({c.key.citing.canonical(), optional_text(c.citing_date),
                      c.key.cited.canonical(), optional_text(c.cited_date),
                      c.timespan ? c.timespan->to_iso8601() : std::string(),
                      accepted.submitter.value(), accepted.archive_ref})
        << '\n';
    ++stats.rows;
  });
  return stats;
}

ExportStats CitationIndex::export_dump(const std::filesystem::path& destination) const {
  std::filesystem::path temp = destination;
  temp += ".tmp";
  ExportStats stats;
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kWriteFailure, "cannot write '" + temp.string() + "'");
    }
    stats = export_dump(out);
    out.flush();
    if (!out) {
      throw Error(ErrorCode::kWriteFailure, "write to '" + temp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(temp, destination, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw Error(ErrorCode::kWriteFailure,
                "cannot move dump into place at '" + destination.string() + "'");
  }
  return stats;
}

IngestReport CitationIndex::import_dump(std::string_view content, Timestamp received_at) {
  std::vector<csv::Row> rows = csv::read(content);
  std::size_t i = 0;
  while (i < rows.size() &&
         (csv::is_blank(rows[i]) ||
          (!rows[i].fields.empty() && rows[i].fields[0].starts_with("#")))) {
    ++i;
  }
  if (i == rows.size() || csv::join(rows[i].fields) != kDumpHeader) {
    throw Error(ErrorCode::kMissingHeader, "not a citation dump: header missing");
  }

  // One batch per accepted (submitter, archive_ref), in first-seen order.
  std::vector<SubmissionBatch> batches;
  std::map<std::pair<std::string, std::string>, std::size_t> batch_of;
  std::vector<RowError> orphan_errors;
  std::size_t ordinal = 0;
  for (++i; i < rows.size(); ++i) {
    const csv::Row& row = rows[i];
    if (csv::is_blank(row)) continue;
    ++ordinal;
    try {
      if (row.fields.size() != 7) {
        throw Error(ErrorCode::kWrongColumnCount, "expected 7 dump columns");
      }
      Orcid submitter = validate_orcid(row.fields[5]);
      auto group = std::make_pair(row.fields[5], row.fields[6]);
      auto [it, inserted] = batch_of.emplace(group, batches.size());
      if (inserted) {
        batches.push_back(SubmissionBatch{{}, submitter, row.fields[6], received_at,
                                          SourceFormat::kCsv, {}});
      }
      SubmissionBatch& batch = batches[it->second];
      try {
        auto date = [](const std::string& cell) -> std::optional<PartialDate> {
          if (cell.empty()) return std::nullopt;
          return parse_partial_date(cell);
        };
        batch.records.push_back(make_citation_record(
            normalize_doi(row.fields[0]), normalize_doi(row.fields[2]),
            date(row.fields[1]), date(row.fields[3])));
      } catch (const Error& e) {
        batch.row_errors.push_back({ordinal, row.line, e.code(), e.what()});
      }
    } catch (const Error& e) {
      orphan_errors.push_back({ordinal, row.line, e.code(), e.what()});
    }
  }

  IngestReport total;
  total.errors = orphan_errors.size();
  for (const auto& e : orphan_errors) ++total.error_breakdown[e.code];
  total.row_errors = std::move(orphan_errors);
  for (const auto& batch : batches) {
    IngestReport r = ingest_batch(batch);
    total.added += r.added;
    total.duplicates_ignored += r.duplicates_ignored;
    total.errors += r.errors;
    total.date_conflicts += r.date_conflicts;
    for (const auto& [code, n] : r.error_breakdown) total.error_breakdown[code] += n;
    total.row_errors.insert(total.row_errors.end(), r.row_errors.begin(),
                            r.row_errors.end());
  }
  return total;
}

}  // namespace croci
