#include "croci/orcid.hpp"

#include "croci/error.hpp"

namespace croci {

char orcid_check_character(std::string_view digits) {
  int total = 0;
  for (char c : digits) total = (total + (c - '0')) * 2;
  int result = (12 - total % 11) % 11;
  return result == 10 ? 'X' : static_cast<char>('0' + result);
}

Orcid validate_orcid(std::string_view text) {
  std::string_view body = text;
  for (std::string_view head : {"https://orcid.org/", "http://orcid.org/"}) {
    if (body.substr(0, head.size()) == head) {
      body.remove_prefix(head.size());
      break;
    }
  }

  auto malformed = [&] {
    return Error(ErrorCode::kMalformedOrcid,
                 "malformed ORCID '" + std::string(text) + "'");
  };
  if (body.size() != 19) throw malformed();

  std::string digits;
  std::string value(body);
  for (std::size_t i = 0; i < value.size(); ++i) {
    char c = value[i];
    if (i % 5 == 4) {
      if (c != '-') throw malformed();
    } else if (i == 18 && (c == 'X' || c == 'x')) {
      value[i] = 'X';
    } else if (c >= '0' && c <= '9') {
      if (i != 18) digits.push_back(c);
    } else {
      throw malformed();
    }
  }

  if (orcid_check_character(digits) != value.back()) {
    throw Error(ErrorCode::kOrcidChecksumFailure,
                "ORCID checksum mismatch for '" + std::string(text) + "'");
  }
  return Orcid(std::move(value));
}

}  // namespace croci
