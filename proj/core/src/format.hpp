#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace aggdiff::detail {

/// Shortest round-trip representation.
inline std::string format_double(double v) {
    if (!std::isfinite(v)) {
        return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Shortest round-trip digits in plain decimal notation (no exponent).
inline std::string format_fixed(double v) {
    if (!std::isfinite(v)) {
        return format_double(v);
    }
    char buf[512];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
    return std::string(buf, res.ptr);
}

/// printf-style %.17g.
inline std::string format_g17(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

} // namespace aggdiff::detail
