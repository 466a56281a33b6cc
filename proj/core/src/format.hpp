#pragma once

#include <charconv>
#include <string>

namespace groupmac::detail {

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double value) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

}  // namespace groupmac::detail
