#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace croci {

/// A checksum-valid ORCID iD in its bare 19-character form.
class Orcid {
 public:
  const std::string& value() const noexcept { return value_; }

  friend auto operator<=>(const Orcid&, const Orcid&) = default;

 private:
  friend Orcid validate_orcid(std::string_view text);
  explicit Orcid(std::string value) : value_(std::move(value)) {}

  std::string value_;
};

/// ISO 7064 MOD 11-2 check character over a run of decimal digits.
char orcid_check_character(std::string_view digits);

/// Accepts "dddd-dddd-dddd-dddX", optionally behind "https://orcid.org/".
/// Throws Error(kMalformedOrcid) on shape errors and
/// Error(kOrcidChecksumFailure) when only the check character is wrong.
Orcid validate_orcid(std::string_view text);

}  // namespace croci
