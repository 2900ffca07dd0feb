#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "causeway/error.hpp"

namespace causeway::detail {

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_double(std::string_view s) {
    double out = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc()) throw ParseError("not a number: '" + std::string(s) + "'");
    for (const char* p = ptr; p != end; ++p)
        if (*p != ' ' && *p != '\t' && *p != '\r')
            throw ParseError("trailing characters in number: '" + std::string(s) + "'");
    return out;
}

inline std::vector<std::string> split(std::string_view line, char delim) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == delim) {
            out.emplace_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

inline std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

inline std::string to_lower(std::string s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
    return s;
}

// FNV-1a, used for input digests and config hashes in run manifests.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace causeway::detail
