#pragma once

#include <string>
#include <string_view>

namespace wrc {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

/// Parses a complete token as a double; throws InvalidParameterError otherwise.
double parse_double(std::string_view token);

}  // namespace wrc
