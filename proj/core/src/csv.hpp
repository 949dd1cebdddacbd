#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include <fmt/format.h>

namespace repro::detail {

// RFC 4180 quoting, only when needed.
inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Shortest round-trip representation; NaN and infinities spelled as in C.
inline std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{}", v);
}

} // namespace repro::detail
