// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "croci/coverage.hpp"
#include "croci/croci.h"
#include "croci/csv.hpp"
#include "test_support.hpp"

namespace {

using namespace croci;
using testing::doi;

// Failed checks append here; a criterion passes when it adds nothing.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
  }
};

std::string data(const std::string& name) { return std::string(CROCI_DATA_DIR) + "/" + name; }

// Expected two-decimal percentages for each fixture row:
// closed, limited, open, with references.
const std::map<std::string, std::array<const char*, 4>> kExpectedPercentages = {
    {"Elsevier BV", {"65.70", "0.00", "0.00", "65.70"}},
    {"Institute of Electrical and Electronics Engineers (IEEE)", {"79.06", "0.36", "0.00", "79.42"}},
    {"American Chemical Society (ACS)", {"31.78", "0.00", "0.00", "31.78"}},
    {"University of Chicago Press", {"9.02", "0.00", "0.00", "9.02"}},
    {"Ovid Technologies (Wolters Kluwer Health)", {"0.00", "40.20", "0.00", "40.20"}},
    {"IOP Publishing", {"0.00", "76.25", "0.00", "76.25"}},
    {"American Psychological Association (APA)", {"0.00", "2.73", "0.00", "2.73"}},
    {"Informa UK Limited", {"0.00", "0.31", "60.85", "61.16"}},
    {"Springer Nature", {"0.00", "0.08", "45.12", "45.20"}},
    {"Cambridge University Press (CUP)", {"0.00", "0.40", "26.59", "26.99"}},
    {"SAGE Publications", {"0.00", "0.19", "47.14", "47.33"}},
    {"Wiley", {"0.00", "0.00", "64.22", "64.22"}},
    {"American Physical Society (APS)", {"0.00", "0.00", "96.54", "96.54"}},
    {"Oxford University Press (OUP)", {"0.00", "0.00", "15.73", "15.73"}},
    {"AIP Publishing", {"0.00", "0.00", "73.02", "73.02"}},
    {"Royal Society of Chemistry (RSC)", {"0.00", "0.00", "52.58", "52.58"}},
    {"Proceedings of the National Academy of Sciences", {"0.00", "0.00", "55.37", "55.37"}},
    {"American Association for the Advancement of Science (AAAS)", {"0.00", "0.00", "9.43", "9.43"}},
    {"JSTOR", {"0.00", "0.00", "0.53", "0.53"}},
};

void participation_table(Check& c) {
  auto counts = parse_participation_counts(testing::read_text(data("fixtures/participation.csv")));
  c.expect(counts.size() == kExpectedPercentages.size(), "expected 19 publisher rows");
  for (const auto& row : counts) {
    auto it = kExpectedPercentages.find(row.publisher_name);
    if (it == kExpectedPercentages.end()) {
      c.expect(false, "unexpected publisher " + row.publisher_name);
      continue;
    }
    auto r = participation_report(row);
    const auto& want = it->second;
    const std::string got[] = {r.pct_closed.to_string(), r.pct_limited.to_string(),
                               r.pct_open.to_string(), r.pct_with_refs.to_string()};
    for (int k = 0; k < 4; ++k) {
      c.expect(got[k] == want[k], row.publisher_name + ": " + got[k] + " != " + want[k]);
    }
  }
}

void ratio_anchors(Check& c) {
  PublisherTotals ieee{"IEEE", {}, 625, 100};
  PublisherTotals acs{"ACS", {}, 73, 100};
  PublisherTotals elsevier{"Elsevier BV", {}, 970, 1055};
  c.expect(open_closed_ratio(ieee) && std::fabs(*open_closed_ratio(ieee) - 6.25) < 1e-12, "IEEE 6.25");
  c.expect(open_closed_ratio(acs) && std::fabs(*open_closed_ratio(acs) - 0.73) < 1e-12, "ACS 0.73");
  c.expect(open_closed_ratio(elsevier) && std::fabs(*open_closed_ratio(elsevier) - 0.92) <= 0.005,
           "Elsevier 0.92");
  c.expect(!open_closed_ratio(PublisherTotals{"x", {}, 5, 0}), "undefined ratio");
  std::ostringstream csv;
  csv << publisher_ranking_csv(rank_publishers({ieee, acs, elsevier}, 20));
  c.expect(csv.str().find("IEEE,625,100,6.25") != std::string::npos, "IEEE ranking row");
  c.expect(csv.str().find("ACS,73,100,0.73") != std::string::npos, "ACS ranking row");
  c.expect(csv.str().find("Elsevier BV,970,1055,0.92") != std::string::npos, "Elsevier ranking row");
}

RegistryClient offline(const std::filesystem::path& dir) {
  RegistryOptions options;
  options.rate_per_second = 0;
  return RegistryClient(make_fixture_transport(dir), options);
}

void closed_count_recount(Check& c) {
  std::mt19937_64 rng(101);
  testing::TempDir dir;
  auto batch = testing::random_batch(rng, 1000, 120, "r");
  // Oracle: distinct pairs counted per cited DOI before the pipeline runs.
  std::set<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> corpus_order;
  std::set<std::string> seen;
  for (const auto& r : batch.records) {
    pairs.emplace(r.citing.canonical(), r.cited.canonical());
    for (const auto* d : {&r.citing, &r.cited}) {
      if (seen.insert(d->canonical()).second) corpus_order.push_back(d->canonical());
    }
  }
  std::map<std::string, std::uint64_t> open;
  for (const auto& [citing, cited] : pairs) ++open[cited];
  std::map<std::string, std::uint64_t> registry_total;
  std::uniform_int_distribution<int> total(0, 40), skip(0, 19);
  for (const auto& d : corpus_order) {
    if (skip(rng) == 0) continue;
    registry_total[d] = static_cast<std::uint64_t>(total(rng));
    testing::write_work_fixture(dir.path(), {d, "journal-article", registry_total[d], {2014}});
  }

  auto index = CitationIndex::open(":memory:");
  index->ingest_batch(batch);
  auto registry = offline(dir.path());
  std::vector<Doi> corpus;
  for (const auto& d : corpus_order) corpus.push_back(doi(d));
  auto rows = build_coverage(corpus, *index, registry);
  c.expect(rows.size() == corpus_order.size(), "one row per DOI");
  for (std::size_t i = 0; i < rows.size() && i < corpus_order.size(); ++i) {
    const auto& row = rows[i];
    const std::string& d = corpus_order[i];
    c.expect(row.doi.canonical() == d, "row order " + d);
    c.expect(row.open_incoming == open[d], "open " + d);
    auto it = registry_total.find(d);
    if (it == registry_total.end()) {
      c.expect(!row.has_metadata() && !row.closed_incoming, "no-metadata " + d);
      continue;
    }
    std::int64_t diff = static_cast<std::int64_t>(it->second) - static_cast<std::int64_t>(open[d]);
    c.expect(row.referenced_by_count == it->second, "registry total " + d);
    c.expect(row.closed_incoming == static_cast<std::uint64_t>(diff < 0 ? 0 : diff), "closed " + d);
    c.expect(row.clamped == (diff < 0), "clamp flag " + d);
  }
}

void dedup_idempotence(Check& c) {
  std::mt19937_64 rng(103);
  std::uniform_int_distribution<int> size(0, 80), space(5, 60);
  for (int i = 0; i < 120; ++i) {
    auto index = CitationIndex::open(":memory:");
    auto batch = testing::random_batch(rng, static_cast<std::size_t>(size(rng)), space(rng),
                                       "batch-" + std::to_string(i));
    auto first = index->ingest_batch(batch);
    c.expect(first.added + first.duplicates_ignored == batch.records.size(), "first pass conserves rows");
    std::string dump = testing::dump_string(*index);
    auto second = index->ingest_batch(batch);
    c.expect(second.added == 0, "second pass adds nothing");
    c.expect(second.duplicates_ignored == batch.records.size(),
             "duplicates_ignored " + std::to_string(second.duplicates_ignored) +
                 " != " + std::to_string(batch.records.size()));
    c.expect(testing::dump_string(*index) == dump, "dump changed on re-ingest");
  }
}

std::string random_case(std::mt19937_64& rng, const std::string& s) {
  std::string out = s;
  std::bernoulli_distribution flip(0.5);
  for (char& ch : out) {
    if (flip(rng)) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  }
  return out;
}

std::string random_escape(std::mt19937_64& rng, const std::string& s) {
  static const char* kHex = "0123456789ABCDEF";
  std::bernoulli_distribution escape(0.3);
  std::string out;
  for (unsigned char ch : s) {
    if (escape(rng)) {
      out += '%';
      out += kHex[ch >> 4];
      out += kHex[ch & 15];
    } else {
      out += static_cast<char>(ch);
    }
  }
  return out;
}

void confluence(Check& c) {
  for (const char* v : {"https://doi.org/10.1038/502295a", "http://dx.doi.org/10.1038/502295a",
                        "doi:10.1038/502295a", "DOI:10.1038/502295a", "10.1038/502295a",
                        " https://DOI.org/10.1038%2F502295A ", "info:doi/10.1038/502295a"}) {
    try {
      c.expect(normalize_doi(v).canonical() == "10.1038/502295a", v);
    } catch (const std::exception& e) {
      c.expect(false, std::string(v) + ": " + e.what());
    }
  }
  std::mt19937_64 rng(107);
  const auto schemes = NormalizeOptions::default_schemes();
  std::uniform_int_distribution<std::size_t> pick(0, schemes.size());
  std::uniform_int_distribution<int> pad(0, 2);
  for (int i = 0; i < 5000; ++i) {
    std::string canonical = testing::random_doi(rng, 100000) + "-v" + std::to_string(i % 7);
    Doi expected = doi(canonical);
    std::size_t s = pick(rng);
    std::string variant = random_case(rng, canonical);
    if (s < schemes.size()) variant = random_case(rng, schemes[s]) + random_escape(rng, variant);
    variant = std::string(static_cast<std::size_t>(pad(rng)), ' ') + variant +
              std::string(static_cast<std::size_t>(pad(rng)), '\t');
    try {
      c.expect(normalize_doi(variant) == expected, variant);
    } catch (const std::exception& e) {
      c.expect(false, variant + ": " + e.what());
    }
  }
}

void dump_round_trip(Check& c) {
  std::mt19937_64 rng(109);
  for (std::size_t n : {0u, 1u, 50u, 1000u, 10000u}) {
    auto index = CitationIndex::open(":memory:");
    std::size_t batches = n == 0 ? 1 : 1 + n / 2500;
    for (std::size_t b = 0; b < batches; ++b) {
      auto batch = testing::random_batch(rng, n / batches, static_cast<int>(n / 2 + 10),
                                         "deposit-" + std::to_string(b));
      if (b % 2) batch.submitter = testing::orcid(testing::kOtherOrcid);
      index->ingest_batch(batch);
    }
    std::string dump = testing::dump_string(*index);
    auto fresh = CitationIndex::open(":memory:");
    fresh->import_dump(dump, testing::at(0));
    c.expect(testing::dump_string(*fresh) == dump, "round trip at n=" + std::to_string(n));
  }
  // Once through the on-disk backend as well.
  testing::TempDir dir;
  auto index = CitationIndex::open(":memory:");
  index->ingest_batch(testing::random_batch(rng, 2000, 800, "disk"));
  std::string dump = testing::dump_string(*index);
  auto disk = CitationIndex::open((dir / "d.db").string());
  disk->import_dump(dump, testing::at(0));
  c.expect(testing::dump_string(*disk) == dump, "round trip through on-disk store");
}

void category_partition(Check& c) {
  std::mt19937_64 rng(113);
  static const char* kTypes[] = {"journal-article", "book", "book-chapter", "proceedings-article",
                                 "dataset", "posted-content", "report", "", "JOURNAL-ARTICLE",
                                 "peer-review", "monograph", "component"};
  std::uniform_int_distribution<int> t(0, 11), v(0, 50), n(0, 300), has(0, 9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<CoverageRow> rows;
    OpenClosed grand;
    int count = n(rng);
    for (int i = 0; i < count; ++i) {
      Doi d = doi("10.1038/p" + std::to_string(i));
      std::uint64_t open = v(rng), closed = v(rng);
      if (has(rng) == 0) {
        rows.push_back({d, open, std::nullopt, std::nullopt, false, std::nullopt});
        continue;
      }
      std::string type = kTypes[t(rng)];
      rows.push_back({d, open, open + closed, closed, false,
                      EntityMetadata{d, type, map_type_to_category(type), std::nullopt,
                                     open + closed, doi_prefix(d), std::nullopt}});
      grand.open += open;
      grand.closed += closed;
    }
    auto totals = aggregate_by_category(rows);
    OpenClosed sum;
    for (Category cat : kAllCategories) {
      sum.open += totals[cat].open;
      sum.closed += totals[cat].closed;
    }
    c.expect(sum == grand, "per-category sums equal grand totals");
    c.expect(totals.grand_total() == grand, "grand_total");
  }
  std::uniform_int_distribution<int> len(0, 30), byte(0, 255);
  for (int i = 0; i < 20000; ++i) {
    std::string raw;
    int k = len(rng);
    for (int j = 0; j < k; ++j) raw.push_back(static_cast<char>(byte(rng)));
    Category cat = map_type_to_category(raw);
    int hits = 0;
    for (Category x : kAllCategories) hits += x == cat ? 1 : 0;
    c.expect(hits == 1, "type maps to exactly one category");
  }
}

void mean_statistic(Check& c) {
  auto m = mean_references_per_citing(93, 5);
  c.expect(m && std::fabs(*m - 18.6) < 1e-12, "mean(93, 5) == 18.6");
  std::mt19937_64 rng(127);
  std::uniform_int_distribution<int> size(1, 400), space(3, 80);
  for (int trial = 0; trial < 40; ++trial) {
    auto index = CitationIndex::open(":memory:");
    auto batch = testing::random_batch(rng, static_cast<std::size_t>(size(rng)), space(rng), "m");
    index->ingest_batch(batch);
    std::set<std::string> citing;
    for (const auto& r : batch.records) citing.insert(r.citing.canonical());
    std::uint64_t refs = 0;
    for (const auto& d : citing) refs += index->reference_count(doi(d));
    // Round half-up to one decimal with integer arithmetic.
    std::uint64_t tenths = (refs * 100 / citing.size() + 5) / 10;
    double brute = static_cast<double>(tenths) / 10.0;
    auto got = mean_references_per_citing(index->size(), index->distinct_citing());
    c.expect(got && std::fabs(*got - brute) < 1e-9,
             "mean " + std::to_string(got.value_or(-1)) + " vs " + std::to_string(brute));
  }
}

void end_to_end_api(Check& c) {
  testing::TempDir dir;
  croci_index* index = nullptr;
  if (croci_index_open((dir / "api.db").c_str(), &index) != CROCI_OK) {
    c.expect(false, std::string("open index: ") + croci_last_error());
    return;
  }
  croci_service* service = nullptr;
  if (croci_service_start(index, "127.0.0.1", 0, 1 << 20, &service) != CROCI_OK) {
    c.expect(false, std::string("start service: ") + croci_last_error());
    croci_index_close(index);
    return;
  }
  std::string body = testing::read_text(data("example.csv"));
  // Expected incoming counts straight from the file's cited column.
  std::map<std::string, std::set<std::string>> expected;
  auto rows = csv::read(body);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (csv::is_blank(rows[i])) continue;
    expected[doi(rows[i].fields[2]).canonical()].insert(doi(rows[i].fields[0]).canonical());
  }

  httplib::Client client("127.0.0.1", croci_service_port(service));
  const std::string target =
      "/submissions?orcid=0000-0002-1825-0097&archive_ref=https%3A%2F%2Fdoi.org%2F10.5281%2Fzenodo.2558257";
  for (int pass = 0; pass < 2; ++pass) {
    auto posted = client.Post(target, body, "text/csv");
    c.expect(posted && posted->status == 201, "POST status, pass " + std::to_string(pass));
    if (posted) {
      auto report = nlohmann::json::parse(posted->body, nullptr, false);
      c.expect(!report.is_discarded() && report["added"] == (pass == 0 ? 3 : 0), "added on pass");
      c.expect(!report.is_discarded() && report["duplicates_ignored"] == (pass == 0 ? 0 : 3),
               "duplicates on pass");
    }
    for (const auto& [cited, citing] : expected) {
      auto got = client.Get("/citation-count/" + httplib::detail::encode_url(cited));
      bool ok = got && got->status == 200 &&
                nlohmann::json::parse(got->body)["count"] == citing.size();
      c.expect(ok, "count for " + cited + " on pass " + std::to_string(pass));
    }
  }
  croci_service_stop(service);
  croci_index_close(index);
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "participation percentages match the reference values", 1, participation_table},
      {2, "open/closed ratio anchors", 1, ratio_anchors},
      {3, "closed counts equal a brute-force recount", 10, closed_count_recount},
      {4, "re-ingesting a batch is ignored and leaves the dump unchanged", 60, dedup_idempotence},
      {5, "DOI variant forms normalize to one canonical form", 10, confluence},
      {6, "dump export/import round trip is byte-identical", 60, dump_round_trip},
      {7, "category totals partition the grand totals", 10, category_partition},
      {8, "mean references per citing entity", 10, mean_statistic},
      {9, "REST submission and citation counts end to end", 30, end_to_end_api},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    Check check;
    auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > criterion.limit_seconds) {
      check.failures.push_back("took " + std::to_string(seconds) + " s, limit " +
                               std::to_string(criterion.limit_seconds) + " s");
    }
    bool ok = check.failures.empty();
    failed += ok ? 0 : 1;
    std::printf("%s criterion %d: %s (%.3f s)\n", ok ? "PASS" : "FAIL", criterion.id, criterion.name,
                seconds);
    for (const auto& f : check.failures) std::printf("    %s\n", f.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
