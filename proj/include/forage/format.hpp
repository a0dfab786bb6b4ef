#pragma once

#include <string>
#include <string_view>

namespace forage {

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);

/// Whole-string parse; throws std::invalid_argument on trailing garbage or empty input.
double parse_double(std::string_view text);

}  // namespace forage
