#include "croci/doi.hpp"

#include <cctype>

#include "croci/error.hpp"

namespace croci {

namespace {

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool starts_with_icase(std::string_view text, std::string_view head) {
  if (text.size() < head.size()) return false;
  for (std::size_t i = 0; i < head.size(); ++i) {
    if (ascii_lower(text[i]) != ascii_lower(head[i])) return false;
  }
  return true;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

[[noreturn]] void malformed(std::string_view raw, std::string_view why) {
  throw Error(ErrorCode::kMalformedDoi,
              "malformed DOI '" + std::string(raw) + "': " + std::string(why));
}

}  // namespace

class DoiParser {
 public:
  static Doi make(std::string canonical, std::size_t slash) {
    return Doi(std::move(canonical), slash);
  }
};

std::vector<std::string> NormalizeOptions::default_schemes() {
  return {"https://doi.org/", "http://doi.org/", "https://dx.doi.org/",
          "http://dx.doi.org/", "doi:", "info:doi/"};
}

bool is_registrant_prefix(std::string_view prefix) {
  if (prefix.substr(0, 3) != "10.") return false;
  std::string_view rest = prefix.substr(3);
  // Leading registrant element: 3 to 9 digits.
  std::size_t i = 0;
  while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i]))) ++i;
  if (i < 3 || i > 9) return false;
  // Optional sub-registrant elements: ".digits".
  while (i < rest.size()) {
    if (rest[i] != '.') return false;
    std::size_t start = ++i;
    while (i < rest.size() && std::isdigit(static_cast<unsigned char>(rest[i]))) ++i;
    if (i == start) return false;
  }
  return true;
}

PrefixId::PrefixId(std::string value) : value_(std::move(value)) {
  if (!is_registrant_prefix(value_)) {
    throw Error(ErrorCode::kMalformedDoi, "malformed DOI prefix '" + value_ + "'");
  }
}

std::string percent_decode(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '%' && i + 2 < text.size()) {
      int hi = hex_value(text[i + 1]);
      int lo = hex_value(text[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(text[i]);
  }
  return out;
}

std::string percent_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
      out.push_back(ch);
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

Doi normalize_doi(std::string_view raw, const NormalizeOptions& options) {
  std::string_view text = trim(raw);
  bool had_scheme = false;
  for (const auto& scheme : options.schemes) {
    if (starts_with_icase(text, scheme)) {
      text.remove_prefix(scheme.size());
      had_scheme = true;
      break;
    }
  }

  std::string body(trim((had_scheme && options.percent_decode)
                              ? std::string_view(percent_decode(text))
                              : text));

  for (char& c : body) {
    auto u = static_cast<unsigned char>(c);
    if (u < 0x20 || u == 0x7F) malformed(raw, "control character");
    c = ascii_lower(c);
  }

  if (body.substr(0, 3) != "10.") malformed(raw, "does not start with \"10.\"");
  std::size_t slash = body.find('/');
  if (slash == std::string::npos) malformed(raw, "missing \"/\" separator");
  if (!is_registrant_prefix(std::string_view(body).substr(0, slash))) {
    malformed(raw, "invalid registrant prefix");
  }
  std::string_view suffix = std::string_view(body).substr(slash + 1);
  if (suffix.empty()) malformed(raw, "empty suffix");
  if (trim(suffix).size() != suffix.size()) malformed(raw, "whitespace around suffix");

  return DoiParser::make(std::move(body), slash);
}

PrefixId doi_prefix(const Doi& doi) { return PrefixId(std::string(doi.prefix())); }

std::string format_doi_url(const Doi& doi) {
  std::string out = "https://doi.org/";
  for (char c : doi.canonical()) {
    switch (c) {
      case '%': out += "%25"; break;
      case ' ': out += "%20"; break;
      case '#': out += "%23"; break;
      case '?': out += "%3F"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace croci
