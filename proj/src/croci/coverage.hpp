#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "croci/category.hpp"
#include "croci/citation_index.hpp"
#include "croci/registry.hpp"

namespace croci {

struct ClosedCount {
  std::uint64_t value = 0;
  bool clamped = false;  // registry total was below the open count
};

/// max(0, referenced_by_count - open_incoming), flagging the clamp.
ClosedCount closed_count(std::uint64_t referenced_by_count, std::uint64_t open_incoming);

struct CoverageRow {
  Doi doi;
  std::uint64_t open_incoming = 0;
  // Both absent when the registry had no record ("no-metadata" rows).
  std::optional<std::uint64_t> referenced_by_count;
  std::optional<std::uint64_t> closed_incoming;
  bool clamped = false;
  std::optional<EntityMetadata> metadata;

  bool has_metadata() const { return metadata.has_value(); }
};

/// One row per distinct corpus DOI, in first-seen order. Throws
/// Error(kRegistryUnavailable) if any lookup stays unavailable after retries;
/// rerunning reuses the client's cache for rows already fetched.
std::vector<CoverageRow> build_coverage(const std::vector<Doi>& corpus,
                                        const CitationIndex& index,
                                        RegistryClient& registry,
                                        std::size_t parallelism = 4);

struct OpenClosed {
  std::uint64_t open = 0;
  std::uint64_t closed = 0;

  friend bool operator==(const OpenClosed&, const OpenClosed&) = default;
};

struct CategoryTotals {
  std::array<OpenClosed, kAllCategories.size()> by_category{};

  const OpenClosed& operator[](Category c) const {
    return by_category[static_cast<std::size_t>(c)];
  }
  OpenClosed& operator[](Category c) { return by_category[static_cast<std::size_t>(c)]; }
  OpenClosed grand_total() const;
};

/// Sums rows with metadata into the five categories.
CategoryTotals aggregate_by_category(const std::vector<CoverageRow>& rows);

inline constexpr std::string_view kUnknownPublisher = "(unknown)";

struct PublisherTotals {
  std::string publisher_name;
  std::set<PrefixId> prefixes;
  std::uint64_t open_received = 0;
  std::uint64_t closed_received = 0;
};

/// open / closed; nullopt when nothing closed was received.
std::optional<double> open_closed_ratio(const PublisherTotals& totals);

/// Every publisher, ordered by name. Prefixes the registry cannot name are
/// pooled under kUnknownPublisher.
std::vector<PublisherTotals> aggregate_by_publisher(const std::vector<CoverageRow>& rows,
                                                    RegistryClient& registry);

/// Top `n` by open_received descending, ties by name ascending.
std::vector<PublisherTotals> rank_publishers_by_open(const std::vector<CoverageRow>& rows,
                                                     RegistryClient& registry,
                                                     std::size_t n);
std::vector<PublisherTotals> rank_publishers(std::vector<PublisherTotals> all,
                                             std::size_t n);

/// Fixed-point percentage in hundredths of a percent.
struct Percent {
  std::uint64_t hundredths = 0;

  /// 100 * part / whole rounded half-up to 2 decimals; whole must be > 0.
  static Percent of(std::uint64_t part, std::uint64_t whole);
  double value() const { return static_cast<double>(hundredths) / 100.0; }
  std::string to_string() const;  // "96.54"

  friend auto operator<=>(const Percent&, const Percent&) = default;
};

struct ParticipationCounts {
  std::string publisher_name;
  std::uint64_t closed_refs = 0;
  std::uint64_t limited_refs = 0;
  std::uint64_t open_refs = 0;
  std::uint64_t total_deposits = 0;
};

struct ParticipationReport {
  std::string publisher_name;
  std::uint64_t closed_refs = 0;
  std::uint64_t limited_refs = 0;
  std::uint64_t open_refs = 0;
  std::uint64_t total_deposits = 0;
  std::uint64_t total_with_refs = 0;
  Percent pct_closed, pct_limited, pct_open, pct_with_refs;
};

/// Throws Error(kInvalidCounts) when the reference deposits exceed the
/// publisher's total deposits.
ParticipationReport participation_report(const ParticipationCounts& counts);

/// Reads "publisher,closed_refs,limited_refs,open_refs,total_deposits" rows.
std::vector<ParticipationCounts> parse_participation_counts(std::string_view csv_text);

struct GapPopulations {
  std::uint64_t zero_open_some_closed = 0;
  std::uint64_t zero_closed_some_open = 0;
};

GapPopulations gap_populations(const std::vector<CoverageRow>& rows);

/// total / citing rounded half-up to one decimal; nullopt when citing == 0.
std::optional<double> mean_references_per_citing(std::uint64_t total_citations,
                                                 std::uint64_t citing_entities);

struct AnalysisResults {
  CategoryTotals categories;
  std::vector<PublisherTotals> ranking;
  std::vector<ParticipationReport> participation;
};

inline constexpr std::string_view kCategoryTotalsHeader = "category,open,closed";
inline constexpr std::string_view kPublisherRankingHeader = "rank,publisher,open,closed,ratio";
inline constexpr std::string_view kParticipationHeader =
    "publisher,closed_refs,limited_refs,open_refs,total_deposits,total_with_refs,"
    "pct_closed,pct_limited,pct_open,pct_with_refs";

/// Writes category_totals.csv, publisher_ranking.csv and participation.csv
/// into `destination` (created if needed). Throws Error(kWriteFailure).
void emit_figure_data(const AnalysisResults& results,
                      const std::filesystem::path& destination);

/// Same content as the files, for callers that want the text.
std::string category_totals_csv(const CategoryTotals& totals);
std::string publisher_ranking_csv(const std::vector<PublisherTotals>& ranking);
std::string participation_csv(const std::vector<ParticipationReport>& reports);

struct AnalysisSummary {
  std::size_t corpus_dois = 0;
  std::size_t rows_with_metadata = 0;
  std::size_t rows_without_metadata = 0;
  std::size_t clamped_rows = 0;
  GapPopulations gaps;
  std::uint64_t total_citations = 0;
  std::uint64_t citing_entities = 0;
  std::optional<double> mean_references_per_citing;
};

/// Full pipeline: coverage rows, category totals, top-n publisher ranking,
/// participation reports for the supplied counts, then emit_figure_data.
AnalysisSummary run_analysis(const CitationIndex& index, RegistryClient& registry,
                             const std::vector<Doi>& corpus,
                             const std::vector<ParticipationCounts>& participation,
                             std::size_t top_n, const std::filesystem::path& out_dir);

/// Newline-delimited DOI list; blank lines and '#' comments skipped.
/// Throws Error(kMalformedDoi) naming the offending line.
std::vector<Doi> parse_corpus(std::string_view text);

}  // namespace croci
