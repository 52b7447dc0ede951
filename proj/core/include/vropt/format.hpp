#pragma once

#include <string>

namespace vropt {

// Shortest decimal form that round-trips the exact double (std::to_chars).
std::string format_double(double v);
void append_double(std::string& out, double v);

std::string hex64(std::uint64_t v);

}  // namespace vropt
