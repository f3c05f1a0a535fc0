#include "croci/timespan.hpp"

#include <algorithm>
#include <cstdint>

namespace croci {

namespace {

struct YMD {
  int y, m, d;
};

// Days since 1970-01-01, proleptic Gregorian.
std::int64_t epoch_day(const YMD& date) {
  std::int64_t y = date.y - (date.m <= 2 ? 1 : 0);
  std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  std::int64_t yoe = y - era * 400;
  std::int64_t mp = (date.m + 9) % 12;
  std::int64_t doy = (153 * mp + 2) / 5 + date.d - 1;
  std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

YMD plus_months(const YMD& date, int months) {
  int total = date.y * 12 + (date.m - 1) + months;
  YMD out{total / 12, total % 12 + 1, 0};
  out.d = std::min(date.d, days_in_month(out.y, out.m));
  return out;
}

// Period between two full dates with later >= earlier.
Timespan day_period(const YMD& later, const YMD& earlier) {
  int total_months = (later.y * 12 + later.m) - (earlier.y * 12 + earlier.m);
  std::int64_t days = later.d - earlier.d;
  if (total_months > 0 && days < 0) {
    --total_months;
    days = epoch_day(later) - epoch_day(plus_months(earlier, total_months));
  }
  Timespan span;
  span.years = total_months / 12;
  span.months = total_months % 12;
  span.days = static_cast<int>(days);
  span.precision = DatePrecision::kDay;
  return span;
}

YMD to_ymd(const PartialDate& date) {
  return {date.year(), date.month().value_or(1), date.day().value_or(1)};
}

}  // namespace

Timespan compute_timespan(const PartialDate& citing, const PartialDate& cited) {
  DatePrecision precision = std::min(citing.precision(), cited.precision());
  YMD a = to_ymd(citing);
  YMD b = to_ymd(cited);

  Timespan span;
  switch (precision) {
    case DatePrecision::kYear: {
      int diff = a.y - b.y;
      span.negative = diff < 0;
      span.years = diff < 0 ? -diff : diff;
      break;
    }
    case DatePrecision::kMonth: {
      int diff = (a.y * 12 + a.m) - (b.y * 12 + b.m);
      span.negative = diff < 0;
      if (diff < 0) diff = -diff;
      span.years = diff / 12;
      span.months = diff % 12;
      break;
    }
    case DatePrecision::kDay: {
      bool negative = epoch_day(a) < epoch_day(b);
      span = negative ? day_period(b, a) : day_period(a, b);
      span.negative = negative;
      break;
    }
  }
  span.precision = precision;
  return span;
}

std::string Timespan::to_iso8601() const {
  std::string out = negative ? "-P" : "P";
  bool any = false;
  auto part = [&](int value, char unit) {
    if (value == 0) return;
    out += std::to_string(value);
    out.push_back(unit);
    any = true;
  };
  part(years, 'Y');
  if (precision >= DatePrecision::kMonth) part(months, 'M');
  if (precision == DatePrecision::kDay) part(days, 'D');
  if (!any) {
    // Zero spans carry their precision unit and no sign.
    out = precision == DatePrecision::kDay     ? "P0D"
          : precision == DatePrecision::kMonth ? "P0M"
                                               : "P0Y";
  }
  return out;
}

}  // namespace croci
