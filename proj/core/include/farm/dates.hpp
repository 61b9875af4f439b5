#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace farm {

struct Date {
  int year = 0;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;
};

/// A calendar month. Ordered chronologically.
struct YearMonth {
  int year = 0;
  int month = 1;

  auto operator<=>(const YearMonth&) const = default;

  /// Months since year 0, so consecutive months differ by exactly one.
  [[nodiscard]] int index() const { return year * 12 + (month - 1); }
  [[nodiscard]] static YearMonth from_index(int index) { return {index / 12, index % 12 + 1}; }
  [[nodiscard]] YearMonth next() const { return from_index(index() + 1); }
  [[nodiscard]] Date first_day() const { return {year, month, 1}; }
};

inline YearMonth month_of(const Date& d) { return {d.year, d.month}; }

/// Accepts `YYYY-MM-DD` or `YYYY-MM` (day defaults to 1). Rejects impossible dates.
std::optional<Date> parse_date(std::string_view text);

std::string format_date(const Date& d);

}  // namespace farm
