#pragma once

#include <compare>
#include <string>

#include "croci/partial_date.hpp"

namespace croci {

/// Signed calendar interval between two publication dates, kept at the
/// coarser precision of its operands.
struct Timespan {
  bool negative = false;
  int years = 0;
  int months = 0;
  int days = 0;
  DatePrecision precision = DatePrecision::kYear;

  /// ISO 8601 duration text, e.g. "P2Y", "-P1M9D", "P0D".
  std::string to_iso8601() const;

  friend auto operator<=>(const Timespan&, const Timespan&) = default;
};

/// citing - cited at the coarser of the two precisions. Negative when the
/// cited material is dated after the citing one.
Timespan compute_timespan(const PartialDate& citing, const PartialDate& cited);

}  // namespace croci
