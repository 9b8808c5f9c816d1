#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace textmark::utf8 {

inline constexpr char32_t kInvalid = 0xFFFFFFFF;

struct Decoded {
  char32_t cp;       // kInvalid for a malformed byte
  std::size_t size;  // bytes consumed, at least 1
};

// Strict decoder: overlong forms, surrogates and values above U+10FFFF decode as a
// single invalid byte.
Decoded decode(std::string_view s, std::size_t pos);

void append(std::string& out, char32_t cp);

bool is_space(char32_t cp);
// Letters, digits and any code point outside the punctuation/symbol blocks.
bool is_word_char(char32_t cp);
// Apostrophes and the hyphen, which join two word runs.
bool is_connector(char32_t cp);

// ASCII lowercase plus U+2019 folded to an apostrophe.
std::string fold(std::string_view s);

std::string ascii_lower(std::string_view s);

std::string_view trim(std::string_view s);

}  // namespace textmark::utf8
