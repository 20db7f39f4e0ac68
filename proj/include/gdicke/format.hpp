#pragma once

#include <string>
#include <string_view>

namespace gdicke {

// Shortest decimal text that parses back to exactly `v`; "nan", "inf", "-inf" otherwise.
std::string format_double(double v);
// Inverse of format_double. Throws DomainError on malformed text.
double parse_double(std::string_view s);

}  // namespace gdicke
