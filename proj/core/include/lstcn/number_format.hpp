#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lstcn {

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

// Strict parse of a whole field; throws ParseError (with `line` if nonzero).
double parse_double(std::string_view text, std::size_t line = 0);
long long parse_integer(std::string_view text, std::size_t line = 0);

// Splits on `delim`; no quoting support.
std::vector<std::string_view> split(std::string_view text, char delim);
std::string_view trim(std::string_view text);

}  // namespace lstcn
