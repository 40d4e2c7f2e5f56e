#pragma once

#include <string>
#include <string_view>

namespace aos {

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double value);

/// Locale-independent parse of a full token; throws std::invalid_argument.
double parse_double(std::string_view token);

}  // namespace aos
