#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace farm {

/// Splits one CSV record. Double-quoted fields may contain commas and `""`.
std::vector<std::string> split_csv_line(std::string_view line);

std::string_view trim(std::string_view text);

/// Parses a `.`-decimal real; empty or malformed text yields nullopt.
std::optional<double> parse_real(std::string_view text);

/// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

}  // namespace farm
