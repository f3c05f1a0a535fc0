#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace croci {

enum class DatePrecision { kYear = 0, kMonth = 1, kDay = 2 };

/// An ISO publication date at year, year-month or full-date precision.
class PartialDate {
 public:
  int year() const noexcept { return year_; }
  std::optional<int> month() const noexcept {
    return month_ ? std::optional<int>(month_) : std::nullopt;
  }
  std::optional<int> day() const noexcept {
    return day_ ? std::optional<int>(day_) : std::nullopt;
  }
  DatePrecision precision() const noexcept {
    return day_ ? DatePrecision::kDay
                : (month_ ? DatePrecision::kMonth : DatePrecision::kYear);
  }

  /// "yyyy", "yyyy-mm" or "yyyy-mm-dd".
  std::string to_string() const;

  /// Validating constructor; throws Error(kMalformedDate).
  static PartialDate from_parts(int year, std::optional<int> month = std::nullopt,
                                std::optional<int> day = std::nullopt);

  friend auto operator<=>(const PartialDate&, const PartialDate&) = default;

 private:
  PartialDate(int y, int m, int d) : year_(y), month_(m), day_(d) {}

  int year_;
  int month_;  // 0 when absent
  int day_;    // 0 when absent
};

int days_in_month(int year, int month);

/// Strict ISO parse of the three precision forms. Throws Error(kMalformedDate).
PartialDate parse_partial_date(std::string_view text);

}  // namespace croci
