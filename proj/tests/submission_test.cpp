#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "croci/error.hpp"
#include "croci/submission.hpp"
#include "test_support.hpp"

namespace croci {
namespace {

using testing::doi;
using testing::orcid;

constexpr const char* kHeader =
    "citing_id,citing_publication_date,cited_id,cited_publication_date\n";

ParsedRows csv_rows(const std::string& body) { return parse_csv_rows(kHeader + body); }

ErrorCode file_error(std::string_view content) {
  try {
    parse_csv_rows(content);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

TEST(CsvSubmission, YearOnlyRecord) {
  auto parsed = csv_rows("10.1108/jd-12-2013-0166,2015,10.1038/502295a,2013\n");
  ASSERT_EQ(parsed.records.size(), 1u);
  const auto& r = parsed.records[0];
  EXPECT_EQ(r.citing, doi("10.1108/jd-12-2013-0166"));
  EXPECT_EQ(r.cited, doi("10.1038/502295a"));
  EXPECT_EQ(r.citing_date->to_string(), "2015");
  EXPECT_EQ(r.cited_date->to_string(), "2013");
}

TEST(CsvSubmission, EmptyDateCells) {
  auto parsed = csv_rows("10.1038/502295a,,10.1038/nature.2017.21800,\n");
  ASSERT_EQ(parsed.records.size(), 1u);
  EXPECT_FALSE(parsed.records[0].citing_date);
  EXPECT_FALSE(parsed.records[0].cited_date);
}

TEST(CsvSubmission, RowErrorsAreLocated) {
  auto parsed = csv_rows(
      "10.1108/jd-12-2013-0166,2015,10.1038/502295a,2013\n"
      "\n"
      "not-a-doi,2015,10.1038/502295a,2013\n"
      "10.1038/502295a,2013,doi:10.1038/502295a,2013\n"
      "10.1038/502295a,2013-02-30,10.1038/x,2013\n"
      "10.1038/502295a,2013\n");
  EXPECT_EQ(parsed.records.size(), 1u);
  ASSERT_EQ(parsed.row_errors.size(), 4u);
  EXPECT_EQ(parsed.row_errors[0].code, ErrorCode::kMalformedDoi);
  EXPECT_EQ(parsed.row_errors[0].row, 2u);
  EXPECT_EQ(parsed.row_errors[0].line, 4u);
  EXPECT_EQ(parsed.row_errors[1].code, ErrorCode::kSelfCitation);
  EXPECT_EQ(parsed.row_errors[2].code, ErrorCode::kMalformedDate);
  EXPECT_EQ(parsed.row_errors[3].code, ErrorCode::kWrongColumnCount);
  EXPECT_EQ(parsed.row_errors[3].row, 5u);
}

TEST(CsvSubmission, FileLevelErrors) {
  EXPECT_EQ(file_error(""), ErrorCode::kMissingHeader);
  EXPECT_EQ(file_error("a,b,c,d\n"), ErrorCode::kMissingHeader);
  EXPECT_EQ(file_error("citing_id,cited_id\n"), ErrorCode::kWrongColumnCount);
  EXPECT_EQ(file_error(std::string("\xEF\xBB\xBF") + kHeader), ErrorCode{});
}

TEST(CsvSubmission, ExampleFileAndBatchFields) {
  auto batch = parse_csv_submission(testing::read_text(std::string(CROCI_DATA_DIR) + "/example.csv"),
                                    orcid(), "https://doi.org/10.5281/zenodo.2558257",
                                    testing::at(1548288000));
  EXPECT_EQ(batch.records.size(), 3u);
  EXPECT_TRUE(batch.row_errors.empty());
  EXPECT_EQ(batch.submitter.value(), testing::kOrcid);
  EXPECT_EQ(format_timestamp(batch.received_at), "2019-01-24T00:00:00Z");
  EXPECT_EQ(batch.source_format, SourceFormat::kCsv);
}

nlohmann::json link(const std::string& source, const std::string& target,
                    const std::string& relation = "References",
                    const std::string& target_scheme = "doi") {
  return {{"RelationshipType", {{"Name", relation}}},
          {"Source", {{"Identifier", {{{"ID", source}, {"IDScheme", "doi"}}}}}},
          {"Target", {{"Identifier", {{{"ID", target}, {"IDScheme", target_scheme}}}}}}};
}

TEST(ScholixSubmission, ReferencesLinkMatchesCsv) {
  nlohmann::json doc = nlohmann::json::array({link("10.1108/jd-12-2013-0166", "10.1038/502295a")});
  doc[0]["Source"]["PublicationDate"] = "2015";
  doc[0]["Target"]["PublicationDate"] = "2013-01-01T00:00:00Z";
  auto scholix = parse_scholix_rows(doc.dump());
  auto csv = csv_rows("10.1108/jd-12-2013-0166,2015,10.1038/502295a,2013-01-01\n");
  EXPECT_EQ(scholix.records, csv.records);
}

TEST(ScholixSubmission, EntryErrors) {
  nlohmann::json doc = nlohmann::json::array(
      {link("10.1038/a", "10.1038/b", "IsSupplementTo"), link("10.1038/a", "12345", "References", "pmid"),
       42, link("10.1038/a", "10.1038/A"), link("10.1038/a", "10.1038/b", "references")});
  auto parsed = parse_scholix_rows(doc.dump());
  ASSERT_EQ(parsed.row_errors.size(), 4u);
  EXPECT_EQ(parsed.row_errors[0].code, ErrorCode::kUnsupportedRelation);
  EXPECT_EQ(parsed.row_errors[1].code, ErrorCode::kMissingDoiIdentifier);
  EXPECT_EQ(parsed.row_errors[2].code, ErrorCode::kMalformedEntry);
  EXPECT_EQ(parsed.row_errors[3].code, ErrorCode::kSelfCitation);
  EXPECT_EQ(parsed.row_errors[3].row, 4u);
  EXPECT_EQ(parsed.records.size(), 1u);
}

TEST(ScholixSubmission, DocumentMustBeAList) {
  EXPECT_THROW(parse_scholix_rows("{\"a\":1}"), Error);
  EXPECT_THROW(parse_scholix_rows("[1,"), Error);
  EXPECT_TRUE(parse_scholix_rows("[]").records.empty());
}

TEST(ScholixSubmission, ExampleFileEqualsCsvExample) {
  auto scholix = parse_scholix_rows(
      testing::read_text(std::string(CROCI_DATA_DIR) + "/example.scholix.json"));
  auto csv = parse_csv_rows(testing::read_text(std::string(CROCI_DATA_DIR) + "/example.csv"));
  EXPECT_EQ(scholix.records, csv.records);
}

TEST(SourceFormat, Parse) {
  EXPECT_EQ(parse_source_format("csv"), SourceFormat::kCsv);
  EXPECT_EQ(parse_source_format("scholix"), SourceFormat::kScholix);
  EXPECT_THROW(parse_source_format("xml"), Error);
}

// Every non-empty data row ends up as exactly one record or one error, and
// a Scholix rendering of the same links yields the same records.
TEST(SubmissionProperties, RowConservationAndFormatEquivalence) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> n_rows(0, 40), corrupt(0, 5);
  for (int trial = 0; trial < 200; ++trial) {
    auto batch = testing::random_batch(rng, n_rows(rng), 30, "r");
    std::string body = kHeader;
    nlohmann::json links = nlohmann::json::array();
    std::size_t expected_records = 0;
    for (const auto& r : batch.records) {
      std::string citing = r.citing.canonical();
      std::string cited = r.cited.canonical();
      bool bad = false;
      switch (corrupt(rng)) {
        case 0: citing = "x" + citing; bad = true; break;
        case 1: cited = citing; bad = true; break;
        case 2: citing = "https://doi.org/" + citing; break;
        default: break;
      }
      expected_records += bad ? 0 : 1;
      body += citing + "," + (r.citing_date ? r.citing_date->to_string() : "") + "," + cited +
              "," + (r.cited_date ? r.cited_date->to_string() : "") + "\n";
      nlohmann::json l = link(citing, cited);
      if (r.citing_date) l["Source"]["PublicationDate"] = r.citing_date->to_string();
      if (r.cited_date) l["Target"]["PublicationDate"] = r.cited_date->to_string();
      links.push_back(l);
    }
    auto parsed = parse_csv_rows(body);
    ASSERT_EQ(parsed.input_rows(), batch.records.size());
    ASSERT_EQ(parsed.records.size(), expected_records);
    auto scholix = parse_scholix_rows(links.dump());
    ASSERT_EQ(scholix.records, parsed.records);
    ASSERT_EQ(scholix.row_errors.size(), parsed.row_errors.size());
    for (std::size_t i = 0; i < parsed.row_errors.size(); ++i) {
      EXPECT_EQ(scholix.row_errors[i].code, parsed.row_errors[i].code);
      EXPECT_EQ(scholix.row_errors[i].row, parsed.row_errors[i].row);
    }
  }
}

// Arbitrary bytes never escape as anything but croci::Error.
TEST(SubmissionProperties, ParsersAreTotal) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> len(0, 200), byte(0, 255);
  const std::string seeds[] = {std::string(kHeader) + "10.1038/a,2015,10.1038/b,2013\n",
                               "[{\"RelationshipType\":{\"Name\":\"References\"}}]"};
  for (int i = 0; i < 3000; ++i) {
    std::string input = seeds[i % 2];
    int edits = len(rng) % 8;
    for (int k = 0; k < edits && !input.empty(); ++k) {
      input[static_cast<std::size_t>(len(rng)) % input.size()] = static_cast<char>(byte(rng));
    }
    for (auto parse : {&parse_csv_rows, &parse_scholix_rows}) {
      try {
        auto parsed = parse(input);
        (void)parsed;
      } catch (const Error&) {
      } catch (...) {
        FAIL() << "non-domain exception";
      }
    }
  }
}

}  // namespace
}  // namespace croci
