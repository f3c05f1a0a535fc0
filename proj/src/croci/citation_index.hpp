#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "croci/store.hpp"
#include "croci/submission.hpp"

namespace croci {

struct IngestReport {
  std::string archive_ref;
  std::size_t added = 0;
  std::size_t duplicates_ignored = 0;
  std::size_t errors = 0;
  // Duplicates whose submitted dates disagreed with the stored (first) ones.
  std::size_t date_conflicts = 0;
  std::map<ErrorCode, std::size_t> error_breakdown;
  std::vector<RowError> row_errors;
};

/// Where missing publication dates are looked up. A miss returns nullopt;
/// a transient failure throws Error(kRegistryUnavailable).
class IssuedDateSource {
 public:
  virtual ~IssuedDateSource() = default;
  virtual std::optional<PartialDate> issued_date(const Doi& doi) = 0;
};

struct DateCompletion {
  StoredCitation citation;
  bool complete = false;  // both dates present afterwards
  bool changed = false;
};

struct ExportStats {
  std::size_t rows = 0;
};

inline constexpr std::string_view kDumpLicenseLine =
    "# License: CC0 1.0 Universal (public domain)";
inline constexpr std::string_view kDumpHeader =
    "citing_id,citing_publication_date,cited_id,cited_publication_date,timespan,"
    "submitter_orcid,archive_ref";

/// Deduplicating citation store with provenance.
///
/// One writer at a time (ingest, complete_dates, import); readers proceed
/// concurrently and observe a batch either entirely or not at all.
class CitationIndex {
 public:
  explicit CitationIndex(std::unique_ptr<Store> store);

  /// Empty path or ":memory:" gives an in-memory index; anything else is an
  /// on-disk store at that path.
  static std::unique_ptr<CitationIndex> open(const std::string& path);

  IngestReport ingest_batch(const SubmissionBatch& batch);

  /// Throws Error(kUnknownCitation) for absent keys.
  DateCompletion complete_dates(const CitationKey& key, IssuedDateSource& source);

  std::vector<StoredCitation> get_references(const Doi& doi) const;
  std::vector<StoredCitation> get_citations(const Doi& doi) const;
  std::size_t reference_count(const Doi& doi) const;
  std::size_t citation_count(const Doi& doi) const;
  std::optional<StoredCitation> find(const CitationKey& key) const;

  /// Keys of citations missing at least one date, in key order.
  std::vector<CitationKey> incomplete_keys() const;

  std::size_t size() const;
  std::size_t distinct_citing() const;

  /// Writes the CC0 dump (license line, header, rows in key order).
  ExportStats export_dump(std::ostream& out) const;
  /// Writes via a temporary file and rename. Throws Error(kWriteFailure).
  ExportStats export_dump(const std::filesystem::path& destination) const;

  /// Loads a dump produced by export_dump, restoring the accepted
  /// submitter and archive reference of each row. Rows are grouped into one
  /// batch per (submitter, archive_ref). Throws Error(kMissingHeader) when
  /// the dump header is absent.
  IngestReport import_dump(std::string_view content, Timestamp received_at);

 private:
  std::unique_ptr<Store> store_;
  std::mutex writer_;
  mutable std::shared_mutex state_;
};

}  // namespace croci
