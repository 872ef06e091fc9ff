#pragma once

#include <cstddef>
#include <string_view>

namespace kbqe::utf8 {

struct CodePoint {
    char32_t value;
    std::size_t offset;  // byte offset of the first unit
    std::size_t length;  // bytes
};

// Decodes the code point starting at `pos`. Invalid sequences decode as a
// single byte with value U+FFFD.
inline CodePoint decode(std::string_view s, std::size_t pos) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    auto cont = [&](std::size_t i) -> int {
        if (pos + i >= s.size()) {
            return -1;
        }
        const auto b = static_cast<unsigned char>(s[pos + i]);
        return (b & 0xC0U) == 0x80U ? static_cast<int>(b & 0x3FU) : -1;
    };
    if (b0 < 0x80U) {
        return {b0, pos, 1};
    }
    if ((b0 & 0xE0U) == 0xC0U) {
        const int c1 = cont(1);
        if (c1 >= 0) {
            return {static_cast<char32_t>(((b0 & 0x1FU) << 6) | static_cast<unsigned>(c1)), pos, 2};
        }
    } else if ((b0 & 0xF0U) == 0xE0U) {
        const int c1 = cont(1);
        const int c2 = cont(2);
        if (c1 >= 0 && c2 >= 0) {
            return {static_cast<char32_t>(((b0 & 0x0FU) << 12) | (static_cast<unsigned>(c1) << 6) |
                                          static_cast<unsigned>(c2)),
                    pos, 3};
        }
    } else if ((b0 & 0xF8U) == 0xF0U) {
        const int c1 = cont(1);
        const int c2 = cont(2);
        const int c3 = cont(3);
        if (c1 >= 0 && c2 >= 0 && c3 >= 0) {
            return {static_cast<char32_t>(((b0 & 0x07U) << 18) | (static_cast<unsigned>(c1) << 12) |
                                          (static_cast<unsigned>(c2) << 6) |
                                          static_cast<unsigned>(c3)),
                    pos, 4};
        }
    }
    return {0xFFFD, pos, 1};
}

inline bool is_space(char32_t c) {
    return (c >= 0x09 && c <= 0x0D) || c == 0x20 || c == 0x85 || c == 0xA0 || c == 0x1680 ||
           (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F ||
           c == 0x205F || c == 0x3000;
}

// ASCII punctuation plus the common Unicode punctuation and symbol blocks
// (quotes, dashes, ellipsis, arrows, CJK punctuation, emoji).
inline bool is_punct_or_symbol(char32_t c) {
    if (c < 0x80) {
        return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
               (c >= 0x7B && c <= 0x7E);
    }
    return (c >= 0xA1 && c <= 0xBF) || c == 0xD7 || c == 0xF7 || (c >= 0x2010 && c <= 0x205E) ||
           (c >= 0x2190 && c <= 0x2BFF) || (c >= 0x3001 && c <= 0x303F) ||
           (c >= 0xFE10 && c <= 0xFE6F) || (c >= 0xFF01 && c <= 0xFF0F) ||
           (c >= 0x1F000 && c <= 0x1FAFF);
}

}  // namespace kbqe::utf8
