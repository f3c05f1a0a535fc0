#include "croci/category.hpp"

#include <fstream>
#include <sstream>

#include "croci/csv.hpp"
#include "croci/error.hpp"

namespace croci {

namespace {

std::string normalize_type(std::string_view raw) {
  while (!raw.empty() && (raw.front() == ' ' || raw.front() == '\t')) raw.remove_prefix(1);
  while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\t' || raw.back() == '\r')) {
    raw.remove_suffix(1);
  }
  std::string out(raw);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

std::string_view to_string(Category category) {
  switch (category) {
    case Category::kJournal: return "journal";
    case Category::kBook: return "book";
    case Category::kProceedings: return "proceedings";
    case Category::kDataset: return "dataset";
    case Category::kOther: return "other";
  }
  return "other";
}

Category parse_category(std::string_view name) {
  std::string n = normalize_type(name);
  for (Category c : kAllCategories) {
    if (to_string(c) == n) return c;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown category '" + std::string(name) + "'");
}

TypeCategoryMap::TypeCategoryMap(std::vector<std::pair<std::string, Category>> rules)
    : rules_(std::move(rules)) {
  for (auto& [pattern, category] : rules_) pattern = normalize_type(pattern);
}

TypeCategoryMap TypeCategoryMap::defaults() {
  using C = Category;
  return TypeCategoryMap({
      {"journal-article", C::kJournal},     {"journal", C::kJournal},
      {"journal-issue", C::kJournal},       {"journal-volume", C::kJournal},
      {"book", C::kBook},                   {"monograph", C::kBook},
      {"edited-book", C::kBook},            {"reference-book", C::kBook},
      {"book-chapter", C::kBook},           {"book-part", C::kBook},
      {"book-section", C::kBook},           {"book-series", C::kBook},
      {"book-set", C::kBook},               {"book-track", C::kBook},
      {"proceedings", C::kProceedings},     {"proceedings-article", C::kProceedings},
      {"proceedings-series", C::kProceedings}, {"dataset", C::kDataset},
  });
}

TypeCategoryMap TypeCategoryMap::parse(std::string_view csv_text) {
  std::vector<csv::Row> rows = csv::read(csv_text);
  std::vector<std::pair<std::string, Category>> rules;
  bool header_seen = false;
  for (const auto& row : rows) {
    if (csv::is_blank(row) || row.fields[0].starts_with("#")) continue;
    if (row.fields.size() != 2) {
      throw Error(ErrorCode::kWrongColumnCount,
                  "type map line " + std::to_string(row.line) + ": expected 2 columns");
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    rules.emplace_back(row.fields[0], parse_category(row.fields[1]));
  }
  if (!header_seen) throw Error(ErrorCode::kMissingHeader, "type map has no header");
  return TypeCategoryMap(std::move(rules));
}

TypeCategoryMap TypeCategoryMap::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot read '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

Category TypeCategoryMap::map(std::string_view raw_type) const {
  std::string type = normalize_type(raw_type);
  for (const auto& [pattern, category] : rules_) {
    if (!pattern.empty() && pattern.back() == '*') {
      if (std::string_view(type).starts_with(
              std::string_view(pattern).substr(0, pattern.size() - 1))) {
        return category;
      }
    } else if (pattern == type) {
      return category;
    }
  }
  return Category::kOther;
}

}  // namespace croci
