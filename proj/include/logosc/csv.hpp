#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "error.hpp"

namespace logosc::csv {

/// Shortest round-trip representation, '.' decimal separator regardless of locale.
inline std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (res.ec != std::errc{}) return "nan";
    return std::string(buf.data(), res.ptr);
}

/// Comma-delimited, LF-terminated rows. Opened in binary mode so no platform
/// newline translation happens.
class Writer {
public:
    Writer(const std::filesystem::path& path, std::initializer_list<std::string_view> header)
        : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
        if (!out_) throw Error(ErrorCode::InvalidConfig, "cannot open " + path.string() + " for writing");
        bool first = true;
        for (auto h : header) {
            if (!first) out_ << ',';
            out_ << h;
            first = false;
        }
        out_ << '\n';
        columns_ = header.size();
    }

    void row(std::initializer_list<double> values) {
        if (values.size() != columns_) throw Error(ErrorCode::InvalidParameter, "row width mismatch");
        bool first = true;
        for (double v : values) {
            if (!first) out_ << ',';
            out_ << format_number(v);
            first = false;
        }
        out_ << '\n';
    }

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_ = 0;
};

/// 64-bit FNV-1a, used for stable parameter tags in file names.
inline std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex_tag(std::uint64_t h, int digits = 12) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string s(static_cast<std::size_t>(digits), '0');
    for (int i = digits - 1; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = kHex[h & 0xF];
        h >>= 4;
    }
    return s;
}

}  // namespace logosc::csv
