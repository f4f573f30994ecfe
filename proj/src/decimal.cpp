#include "stq/decimal.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace stq {

std::optional<double> parse_decimal(std::string_view text)
{
    if (text.empty())
        return std::nullopt;
    // from_chars does not accept a leading '+'
    if (text.front() == '+')
        text.remove_prefix(1);
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v, std::chars_format::general);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        return std::nullopt;
    return v;
}

std::optional<std::int64_t> parse_integer(std::string_view text)
{
    if (text.empty())
        return std::nullopt;
    if (text.front() == '+')
        text.remove_prefix(1);
    std::int64_t v = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        return std::nullopt;
    return v;
}

std::string format_decimal(double v)
{
    if (v == 0.0)
        return std::signbit(v) ? "-0" : "0";
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

} // namespace stq
