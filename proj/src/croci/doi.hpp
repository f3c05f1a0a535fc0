#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace croci {

/// Registrant prefix of a DOI ("10.1038"). Always valid once constructed.
class PrefixId {
 public:
  /// Throws Error(kMalformedDoi) when `value` is not a registrant prefix.
  explicit PrefixId(std::string value);

  const std::string& value() const noexcept { return value_; }

  friend auto operator<=>(const PrefixId&, const PrefixId&) = default;

 private:
  std::string value_;
};

/// A canonical DOI: lowercase ASCII, "10.<registrant>/<suffix>".
///
/// The only way to obtain a Doi is through normalize_doi(), so every
/// instance satisfies the prefix/suffix invariants.
class Doi {
 public:
  const std::string& canonical() const noexcept { return canonical_; }
  std::string_view prefix() const noexcept {
    return std::string_view(canonical_).substr(0, slash_);
  }
  std::string_view suffix() const noexcept {
    return std::string_view(canonical_).substr(slash_ + 1);
  }

  friend bool operator==(const Doi& a, const Doi& b) noexcept {
    return a.canonical_ == b.canonical_;
  }
  friend std::strong_ordering operator<=>(const Doi& a, const Doi& b) noexcept {
    return a.canonical_ <=> b.canonical_;
  }

 private:
  friend class DoiParser;
  Doi(std::string canonical, std::size_t slash)
      : canonical_(std::move(canonical)), slash_(slash) {}

  std::string canonical_;
  std::size_t slash_;
};

struct NormalizeOptions {
  // Resolver/scheme forms stripped before validation, matched ASCII
  // case-insensitively. At most one is removed.
  std::vector<std::string> schemes = default_schemes();
  // Decode %XX escapes once on scheme-prefixed (URI) input. Bare DOIs are
  // never decoded. Callers that already decoded a URL path turn this off.
  bool percent_decode = true;

  static std::vector<std::string> default_schemes();
};

/// Parses any supported surface form into a canonical Doi.
/// Throws Error(kMalformedDoi) naming the defect.
Doi normalize_doi(std::string_view raw, const NormalizeOptions& options = {});

PrefixId doi_prefix(const Doi& doi);

/// "https://doi.org/<canonical>", escaping the few characters that would
/// otherwise not survive URL parsing (so normalize_doi round-trips).
std::string format_doi_url(const Doi& doi);

/// Returns true when `prefix` has the registrant shape "10.NNNN[.NNN...]".
bool is_registrant_prefix(std::string_view prefix);

/// Decodes %XX escapes once. Invalid escapes are kept literally.
std::string percent_decode(std::string_view text);

/// Encodes every byte outside the RFC 3986 unreserved set.
std::string percent_encode(std::string_view text);

}  // namespace croci
