#include "croci/partial_date.hpp"

#include <cstdio>

#include "croci/error.hpp"

namespace croci {

namespace {

bool is_leap(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

bool all_digits(std::string_view s) {
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return !s.empty();
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

int days_in_month(int year, int month) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2 && is_leap(year)) return 29;
  return kDays[month - 1];
}

PartialDate PartialDate::from_parts(int year, std::optional<int> month,
                                    std::optional<int> day) {
  auto bad = [&](const char* what) {
    return Error(ErrorCode::kMalformedDate, std::string("invalid date: ") + what);
  };
  if (year < 1000 || year > 2999) throw bad("year out of range");
  if (day && !month) throw bad("day without month");
  if (month && (*month < 1 || *month > 12)) throw bad("month out of range");
  if (day && (*day < 1 || *day > days_in_month(year, *month))) {
    throw bad("day out of range for month");
  }
  return PartialDate(year, month.value_or(0), day.value_or(0));
}

std::string PartialDate::to_string() const {
  char buf[16];
  if (day_) {
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year_, month_, day_);
  } else if (month_) {
    std::snprintf(buf, sizeof buf, "%04d-%02d", year_, month_);
  } else {
    std::snprintf(buf, sizeof buf, "%04d", year_);
  }
  return buf;
}

PartialDate parse_partial_date(std::string_view text) {
  auto malformed = [&] {
    return Error(ErrorCode::kMalformedDate,
                 "malformed date '" + std::string(text) + "'");
  };
  if (text.size() != 4 && text.size() != 7 && text.size() != 10) throw malformed();
  if (!all_digits(text.substr(0, 4))) throw malformed();
  std::optional<int> month, day;
  if (text.size() >= 7) {
    if (text[4] != '-' || !all_digits(text.substr(5, 2))) throw malformed();
    month = to_int(text.substr(5, 2));
  }
  if (text.size() == 10) {
    if (text[7] != '-' || !all_digits(text.substr(8, 2))) throw malformed();
    day = to_int(text.substr(8, 2));
  }
  try {
    return PartialDate::from_parts(to_int(text.substr(0, 4)), month, day);
  } catch (const Error&) {
    throw malformed();
  }
}

}  // namespace croci
