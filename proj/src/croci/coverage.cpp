#include "croci/coverage.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <thread>
#include <unordered_set>

#include "croci/csv.hpp"
#include "croci/error.hpp"

namespace croci {

namespace {

using u128 = unsigned __int128;

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.flush();
  if (!out) throw Error(ErrorCode::kWriteFailure, "cannot write '" + path.string() + "'");
}

std::uint64_t parse_count(const std::string& cell, std::size_t line) {
  std::string digits;
  for (char c : cell) {
    if (c == ',' || c == '_' || c == ' ') continue;  // "11,020,314" style
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::kInvalidCounts,
                  "line " + std::to_string(line) + ": not a count '" + cell + "'");
    }
    digits.push_back(c);
  }
  if (digits.empty()) {
    throw Error(ErrorCode::kInvalidCounts, "line " + std::to_string(line) + ": empty count");
  }
  return std::stoull(digits);
}

}  // namespace

ClosedCount closed_count(std::uint64_t referenced_by_count, std::uint64_t open_incoming) {
  if (referenced_by_count < open_incoming) return {0, true};
  return {referenced_by_count - open_incoming, false};
}

std::vector<CoverageRow> build_coverage(const std::vector<Doi>& corpus,
                                        const CitationIndex& index,
                                        RegistryClient& registry,
                                        std::size_t parallelism) {
  std::vector<Doi> dois;
  std::unordered_set<std::string> seen;
  for (const auto& doi : corpus) {
    if (seen.insert(doi.canonical()).second) dois.push_back(doi);
  }

  std::vector<std::optional<CoverageRow>> slots(dois.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= dois.size()) return;
      try {
        const Doi& doi = dois[i];
        CoverageRow row{doi, index.citation_count(doi), std::nullopt, std::nullopt, false,
                        std::nullopt};
        auto meta = registry.fetch_entity_metadata(doi);
        if (meta.status == LookupStatus::kUnavailable) {
          throw Error(ErrorCode::kRegistryUnavailable,
                      "registry unavailable for " + doi.canonical());
        }
        if (meta.found()) {
          ClosedCount closed = closed_count(meta.value->referenced_by_count, row.open_incoming);
          row.referenced_by_count = meta.value->referenced_by_count;
          row.closed_incoming = closed.value;
          row.clamped = closed.clamped;
          row.metadata = std::move(meta.value);
        }
        slots[i] = std::move(row);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  std::size_t threads = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(1, dois.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<CoverageRow> rows;
  rows.reserve(slots.size());
  for (auto& slot : slots) rows.push_back(std::move(*slot));
  return rows;
}

OpenClosed CategoryTotals::grand_total() const {
  OpenClosed total;
  for (const auto& t : by_category) {
    total.open += t.open;
    total.closed += t.closed;
  }
  return total;
}

CategoryTotals aggregate_by_category(const std::vector<CoverageRow>& rows) {
  CategoryTotals totals;
  for (const auto& row : rows) {
    if (!row.has_metadata()) continue;
    OpenClosed& bucket = totals[row.metadata->category];
    bucket.open += row.open_incoming;
    bucket.closed += *row.closed_incoming;
  }
  return totals;
}

std::optional<double> open_closed_ratio(const PublisherTotals& totals) {
  if (totals.closed_received == 0) return std::nullopt;
  return static_cast<double>(totals.open_received) /
         static_cast<double>(totals.closed_received);
}

std::vector<PublisherTotals> aggregate_by_publisher(const std::vector<CoverageRow>& rows,
                                                    RegistryClient& registry) {
  std::map<std::string, PublisherTotals> by_name;
  for (const auto& row : rows) {
    if (!row.has_metadata()) continue;
    const PrefixId& prefix = row.metadata->prefix;
    auto name = registry.lookup_publisher(prefix);
    if (name.status == LookupStatus::kUnavailable) {
      throw Error(ErrorCode::kRegistryUnavailable,
                  "registry unavailable for prefix " + prefix.value());
    }
    std::string publisher = name.found() ? *name.value : std::string(kUnknownPublisher);
    PublisherTotals& t = by_name[publisher];
    t.publisher_name = publisher;
    t.prefixes.insert(prefix);
    t.open_received += row.open_incoming;
    t.closed_received += *row.closed_incoming;
  }
  std::vector<PublisherTotals> out;
  out.reserve(by_name.size());
  for (auto& [name, totals] : by_name) out.push_back(std::move(totals));
  return out;
}

std::vector<PublisherTotals> rank_publishers(std::vector<PublisherTotals> all, std::size_t n) {
  std::sort(all.begin(), all.end(), [](const PublisherTotals& a, const PublisherTotals& b) {
    if (a.open_received != b.open_received) return a.open_received > b.open_received;
    return a.publisher_name < b.publisher_name;
  });
  if (all.size() > n) all.resize(n);
  return all;
}

std::vector<PublisherTotals> rank_publishers_by_open(const std::vector<CoverageRow>& rows,
                                                     RegistryClient& registry,
                                                     std::size_t n) {
  return rank_publishers(aggregate_by_publisher(rows, registry), n);
}

Percent Percent::of(std::uint64_t part, std::uint64_t whole) {
  u128 num = u128(part) * 20000 + whole;
  return Percent{static_cast<std::uint64_t>(num / (u128(whole) * 2))};
}

std::string Percent::to_string() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%llu.%02llu",
                static_cast<unsigned long long>(hundredths / 100),
                static_cast<unsigned long long>(hundredths % 100));
  return buf;
}

ParticipationReport participation_report(const ParticipationCounts& counts) {
  u128 with_refs = u128(counts.closed_refs) + counts.limited_refs + counts.open_refs;
  if (with_refs > counts.total_deposits) {
    throw Error(ErrorCode::kInvalidCounts,
                "publications with references exceed total deposits for '" +
                    counts.publisher_name + "'");
  }
  ParticipationReport r{counts.publisher_name, counts.closed_refs, counts.limited_refs,
                        counts.open_refs,      counts.total_deposits,
                        static_cast<std::uint64_t>(with_refs), {}, {}, {}, {}};
  if (counts.total_deposits > 0) {
    r.pct_closed = Percent::of(r.closed_refs, r.total_deposits);
    r.pct_limited = Percent::of(r.limited_refs, r.total_deposits);
    r.pct_open = Percent::of(r.open_refs, r.total_deposits);
    r.pct_with_refs = Percent::of(r.total_with_refs, r.total_deposits);
  }
  return r;
}

std::vector<ParticipationCounts> parse_participation_counts(std::string_view csv_text) {
  std::vector<ParticipationCounts> out;
  bool header_seen = false;
  for (const auto& row : csv::read(csv_text)) {
    if (csv::is_blank(row) || row.fields[0].starts_with("#")) continue;
    if (row.fields.size() != 5) {
      throw Error(ErrorCode::kWrongColumnCount,
                  "participation line " + std::to_string(row.line) + ": expected 5 columns");
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    out.push_back({row.fields[0], parse_count(row.fields[1], row.line),
                   parse_count(row.fields[2], row.line), parse_count(row.fields[3], row.line),
                   parse_count(row.fields[4], row.line)});
  }
  if (!header_seen) throw Error(ErrorCode::kMissingHeader, "participation file has no header");
  return out;
}

GapPopulations gap_populations(const std::vector<CoverageRow>& rows) {
  GapPopulations gaps;
  for (const auto& row : rows) {
    if (!row.has_metadata()) continue;
    if (row.open_incoming == 0 && *row.closed_incoming >= 1) ++gaps.zero_open_some_closed;
    if (*row.closed_incoming == 0 && row.open_incoming >= 1) ++gaps.zero_closed_some_open;
  }
  return gaps;
}

std::optional<double> mean_references_per_citing(std::uint64_t total_citations,
                                                 std::uint64_t citing_entities) {
  if (citing_entities == 0) return std::nullopt;
  u128 tenths = (u128(total_citations) * 20 + citing_entities) / (u128(citing_entities) * 2);
  return static_cast<double>(static_cast<std::uint64_t>(tenths)) / 10.0;
}

std::string category_totals_csv(const CategoryTotals& totals) {
  std::string out(kCategoryTotalsHeader);
  out += '\n';
  for (Category c : kAllCategories) {
    out += std::string(to_string(c)) + ',' + std::to_string(totals[c].open) + ',' +
           std::to_string(totals[c].closed) + '\n';
  }
  return out;
}

std::string publisher_ranking_csv(const std::vector<PublisherTotals>& ranking) {
  std::string out(kPublisherRankingHeader);
  out += '\n';
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const auto& t = ranking[i];
    std::string ratio;
    if (auto r = open_closed_ratio(t)) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", *r);
      ratio = buf;
    }
    out += csv::join({std::to_string(i + 1), t.publisher_name,
                      std::to_string(t.open_received), std::to_string(t.closed_received),
                      ratio});
    out += '\n';
  }
  return out;
}

std::string participation_csv(const std::vector<ParticipationReport>& reports) {
  std::string out(kParticipationHeader);
  out += '\n';
  for (const auto& r : reports) {
    out += csv::join({r.publisher_name, std::to_string(r.closed_refs),
                      std::to_string(r.limited_refs), std::to_string(r.open_refs),
                      std::to_string(r.total_deposits), std::to_string(r.total_with_refs),
                      r.pct_closed.to_string(), r.pct_limited.to_string(),
                      r.pct_open.to_string(), r.pct_with_refs.to_string()});
    out += '\n';
  }
  return out;
}

void emit_figure_data(const AnalysisResults& results,
                      const std::filesystem::path& destination) {
  std::error_code ec;
  std::filesystem::create_directories(destination, ec);
  if (ec) {
    throw Error(ErrorCode::kWriteFailure,
                "cannot create '" + destination.string() + "': " + ec.message());
  }
  write_file(destination / "category_totals.csv", category_totals_csv(results.categories));
  write_file(destination / "publisher_ranking.csv", publisher_ranking_csv(results.ranking));
  write_file(destination / "participation.csv", participation_csv(results.participation));
}

AnalysisSummary run_analysis(const CitationIndex& index, RegistryClient& registry,
                             const std::vector<Doi>& corpus,
                             const std::vector<ParticipationCounts>& participation,
                             std::size_t top_n, const std::filesystem::path& out_dir) {
  std::vector<CoverageRow> rows = build_coverage(corpus, index, registry);

  AnalysisResults results;
  results.categories = aggregate_by_category(rows);
  results.ranking = rank_publishers_by_open(rows, registry, top_n);
  for (const auto& counts : participation) {
    results.participation.push_back(participation_report(counts));
  }
  emit_figure_data(results, out_dir);

  AnalysisSummary summary;
  summary.corpus_dois = rows.size();
  for (const auto& row : rows) {
    if (row.has_metadata()) {
      ++summary.rows_with_metadata;
    } else {
      ++summary.rows_without_metadata;
    }
    if (row.clamped) ++summary.clamped_rows;
  }
  summary.gaps = gap_populations(rows);
  summary.total_citations = index.size();
  summary.citing_entities = index.distinct_citing();
  summary.mean_references_per_citing =
      mean_references_per_citing(summary.total_citations, summary.citing_entities);
  return summary;
}

std::vector<Doi> parse_corpus(std::string_view text) {
  std::vector<Doi> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    try {
      out.push_back(normalize_doi(line));
    } catch (const Error& e) {
      throw Error(ErrorCode::kMalformedDoi,
                  "corpus line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace croci
