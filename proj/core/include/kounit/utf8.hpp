#pragma once

#include <string>
#include <string_view>

namespace kounit::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes UTF-8. Ill-formed subsequences (overlongs, surrogates, truncated
// sequences, stray continuation bytes) each become one U+FFFD.
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view text);

void append(std::string& out, char32_t c);

std::string encode(char32_t c);

}  // namespace kounit::utf8
