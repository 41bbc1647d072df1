#include "transim/time_format.hpp"

#include "transim/types.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <string>

namespace transim {

namespace {

double parse_double(std::string_view text, std::string_view context) {
    std::string owned(text);
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(owned, &consumed);
    } catch (const std::exception&) {
        throw ValidationError(fmt::format("invalid time '{}'", context));
    }
    if (consumed != owned.size()) {
        throw ValidationError(fmt::format("invalid time '{}'", context));
    }
    return value;
}

}  // namespace

double parse_clock(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\r' || text.back() == '\t')) text.remove_suffix(1);
    if (text.empty()) throw ValidationError("empty time value");

    const auto first = text.find(':');
    if (first == std::string_view::npos) return parse_double(text, text);

    const auto second = text.find(':', first + 1);
    if (second == std::string_view::npos) throw ValidationError(fmt::format("invalid time '{}'", text));

    const double hours = parse_double(text.substr(0, first), text);
    const double minutes = parse_double(text.substr(first + 1, second - first - 1), text);
    const double seconds = parse_double(text.substr(second + 1), text);
    if (hours < 0 || minutes < 0 || minutes >= 60 || seconds < 0 || seconds >= 60) {
        throw ValidationError(fmt::format("invalid time '{}'", text));
    }
    return hours * 3600.0 + minutes * 60.0 + seconds;
}

std::string format_clock(double seconds) {
    const long long total = static_cast<long long>(std::floor(seconds));
    const long long sign_free = total < 0 ? -total : total;
    return fmt::format("{}{:02d}:{:02d}:{:02d}", total < 0 ? "-" : "", sign_free / 3600, (sign_free / 60) % 60,
                       sign_free % 60);
}

std::string format_number(double value, int precision) {
    if (!std::isfinite(value)) return value > 0 ? "inf" : (value < 0 ? "-inf" : "nan");
    std::string out = fmt::format("{:.{}f}", value, precision);
    if (out.find_first_not_of("-0.") == std::string::npos) out = fmt::format("{:.{}f}", 0.0, precision);
    return out;
}

}  // namespace transim
