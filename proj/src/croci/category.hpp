#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace croci {

enum class Category { kJournal, kBook, kProceedings, kDataset, kOther };

inline constexpr std::array<Category, 5> kAllCategories = {
    Category::kJournal, Category::kBook, Category::kProceedings, Category::kDataset,
    Category::kOther};

std::string_view to_string(Category category);
/// Throws Error(kInvalidArgument) for names outside the five categories.
Category parse_category(std::string_view name);

/// Ordered raw-type -> category rules; first match wins, unmatched types
/// fall into Category::kOther. A pattern ending in '*' matches by prefix.
class TypeCategoryMap {
 public:
  TypeCategoryMap() = default;
  explicit TypeCategoryMap(std::vector<std::pair<std::string, Category>> rules);

  static TypeCategoryMap defaults();
  /// Reads a "type,category" CSV (header required). Throws Error.
  static TypeCategoryMap load(const std::filesystem::path& path);
  static TypeCategoryMap parse(std::string_view csv_text);

  Category map(std::string_view raw_type) const;
  const std::vector<std::pair<std::string, Category>>& rules() const { return rules_; }

 private:
  std::vector<std::pair<std::string, Category>> rules_;
};

inline Category map_type_to_category(std::string_view raw_type,
                                     const TypeCategoryMap& map = TypeCategoryMap::defaults()) {
  return map.map(raw_type);
}

}  // namespace croci
