#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace stq {

/// Parses a complete decimal floating-point literal. Rejects trailing
/// garbage, empty input, and non-finite results.
std::optional<double> parse_decimal(std::string_view text);

std::optional<std::int64_t> parse_integer(std::string_view text);

/// Shortest decimal form that reads back to the same double.
std::string format_decimal(double v);

} // namespace stq
