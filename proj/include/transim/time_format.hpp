#pragma once

#include <string>
#include <string_view>

namespace transim {

/// Parses "HH:MM:SS" (hours may exceed 23) into seconds from midnight.
/// Plain decimal seconds are accepted as well.
double parse_clock(std::string_view text);

/// Formats seconds from midnight as "HH:MM:SS", truncating to the whole second
/// like a fare gate clock. Truncation keeps a time inside its interval whenever
/// interval boundaries fall on whole seconds.
std::string format_clock(double seconds);

/// Fixed-precision decimal used in every tabular output, so reruns are byte-identical.
std::string format_number(double value, int precision = 3);

}  // namespace transim
