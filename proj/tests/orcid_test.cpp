#include <random>

#include <gtest/gtest.h>

#include "croci/error.hpp"
#include "croci/orcid.hpp"

namespace croci {
namespace {

// Independent ISO 7064 MOD 11-2 check: explicit power-of-two weights and a
// search for the check value that makes the weighted sum congruent to 1.
char oracle_check(const std::string& digits15) {
  long long total = 0;
  for (std::size_t i = 0; i < digits15.size(); ++i) {
    total += static_cast<long long>(digits15[i] - '0') << (16 - (i + 1));
  }
  for (int c = 0; c <= 10; ++c) {
    if ((total + c) % 11 == 1) return c == 10 ? 'X' : static_cast<char>('0' + c);
  }
  return '?';
}

ErrorCode code_of(std::string_view raw) {
  try {
    validate_orcid(raw);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

TEST(Orcid, FrozenOracleValues) {
  // Check characters computed with oracle_check before the validator existed.
  EXPECT_EQ(validate_orcid("0000-0002-1825-0097").value(), "0000-0002-1825-0097");
  EXPECT_EQ(validate_orcid("0000-0003-0530-4305").value(), "0000-0003-0530-4305");
  EXPECT_EQ(validate_orcid("0000-0002-1694-233X").value(), "0000-0002-1694-233X");
  EXPECT_EQ(oracle_check("000000021825009"), '7');
  EXPECT_EQ(oracle_check("000000021694233"), 'X');
}

TEST(Orcid, ChecksumFailure) {
  EXPECT_EQ(code_of("0000-0002-1825-0098"), ErrorCode::kOrcidChecksumFailure);
}

TEST(Orcid, ShapeErrors) {
  EXPECT_EQ(code_of("1234-56"), ErrorCode::kMalformedOrcid);
  EXPECT_EQ(code_of("0000000218250097"), ErrorCode::kMalformedOrcid);
  EXPECT_EQ(code_of("0000-0002-1825-009A"), ErrorCode::kMalformedOrcid);
  EXPECT_EQ(code_of("X000-0002-1825-0097"), ErrorCode::kMalformedOrcid);
  EXPECT_EQ(code_of(""), ErrorCode::kMalformedOrcid);
}

TEST(Orcid, UrlFormAndLowercaseX) {
  EXPECT_EQ(validate_orcid("https://orcid.org/0000-0002-1825-0097").value(),
            "0000-0002-1825-0097");
  EXPECT_EQ(validate_orcid("0000-0002-1694-233x").value(), "0000-0002-1694-233X");
}

TEST(Orcid, AgreesWithOracleOnRandomIds) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> digit(0, 9);
  for (int i = 0; i < 5000; ++i) {
    std::string digits;
    for (int k = 0; k < 15; ++k) digits.push_back(static_cast<char>('0' + digit(rng)));
    char expected = oracle_check(digits);
    ASSERT_EQ(orcid_check_character(digits), expected);
    std::string id = digits.substr(0, 4) + "-" + digits.substr(4, 4) + "-" +
                     digits.substr(8, 4) + "-" + digits.substr(12, 3) + expected;
    EXPECT_NO_THROW(validate_orcid(id)) << id;
    char wrong = expected == '0' ? '1' : '0';
    id.back() = wrong;
    EXPECT_EQ(code_of(id), ErrorCode::kOrcidChecksumFailure) << id;
  }
}

}  // namespace
}  // namespace croci
