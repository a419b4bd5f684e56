#pragma once

// Number formatting for CSV reports: shortest round-trip decimal, "inf"/"-inf"/"nan" for non-finite.

#include <charconv>
#include <string>

namespace sclaw::csv {

inline std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string num(long long v) { return std::to_string(v); }
inline std::string num(unsigned long long v) { return std::to_string(v); }
inline std::string num(unsigned long v) { return std::to_string(v); }
inline std::string num(int v) { return std::to_string(v); }
inline std::string flag(bool v) { return v ? "1" : "0"; }

}  // namespace sclaw::csv
