#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace croci::csv {

struct Row {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based physical line the row starts on
};

// Comma-separated, optional double-quote quoting with "" escapes, LF or
// CRLF line endings. Quoted fields may span lines. Never throws on
// malformed quoting; an unterminated quote runs to end of input.
std::vector<Row> read(std::string_view content);

bool is_blank(const Row& row);

// Quotes a field only when it contains a delimiter, quote or line break.
std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

}  // namespace croci::csv
