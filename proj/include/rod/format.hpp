#pragma once

#include <string>
#include <string_view>

namespace rod {

/// Shortest text that parses back to the identical double. Magnitudes in
/// [1e-3, 1e4) are written in fixed notation, everything else in scientific.
std::string format_number(double value);

/// Strict parse of a whole field (surrounding blanks allowed). Throws
/// std::invalid_argument on trailing garbage or an empty field.
double parse_number(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace rod
