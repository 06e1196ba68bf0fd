#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small parsing helpers shared by the line-oriented file formats.
namespace xwalk {

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_whitespace(std::string_view s);

// Drops everything from the first '#'.
std::string_view strip_comment(std::string_view s);

// Whole-string numeric parses; std::nullopt on trailing garbage or overflow.
std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);
std::optional<bool> parse_bool(std::string_view s);

// Fixed-point text with half-up rounding at `places` decimals.
double round_half_up(double value, int places);
std::string format_fixed(double value, int places);

}  // namespace xwalk
