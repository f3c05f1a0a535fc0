#include "croci/csv.hpp"

namespace croci::csv {

std::vector<Row> read(std::string_view content) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  std::size_t line = 1;
  row.line = line;
  bool in_quotes = false;
  bool at_field_start = true;
  bool row_has_content = false;

  auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    at_field_start = true;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row = Row{};
    row.line = line;
    row_has_content = false;
  };

  for (std::size_t i = 0; i < content.size(); ++i) {
    char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (at_field_start) {
          in_quotes = true;
          at_field_start = false;
          row_has_content = true;
        } else {
          field.push_back(c);
        }
        break;
      case ',':
        row_has_content = true;
        end_field();
        break;
      case '\r':
        if (i + 1 < content.size() && content[i + 1] == '\n') break;
        field.push_back(c);
        break;
      case '\n':
        ++line;
        end_row();
        break;
      default:
        field.push_back(c);
        at_field_start = false;
        row_has_content = true;
    }
  }
  if (row_has_content || !field.empty()) end_row();
  return rows;
}

bool is_blank(const Row& row) {
  if (row.fields.size() != 1) return false;
  for (char c : row.fields[0]) {
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += escape(fields[i]);
  }
  return out;
}

}  // namespace croci::csv
