#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <system_error>

namespace farmlink {

/// Shortest round-trip decimal form of a double ("414", "0.5", "1e-06" style).
/// All file formats and wire encodings that carry numbers as text use this.
inline std::string format_double(double value) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

/// Strict full-string parse; rejects trailing garbage and non-finite values.
inline bool parse_double(std::string_view text, double& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = first + text.size();
    double v = 0.0;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) return false;
    if (!std::isfinite(v)) return false;
    out = v;
    return true;
}

} // namespace farmlink
