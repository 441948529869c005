#ifndef ABRIDGER_UNICODE_HPP
#define ABRIDGER_UNICODE_HPP

// Minimal UTF-8 handling and character classes. All text offsets in the
// toolkit count Unicode scalar values, so documents are decoded once into
// UTF-32 and every range indexes that buffer.

#include <string>
#include <string_view>

#include "abridger/error.hpp"

namespace abridger::unicode {

inline std::u32string decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  std::size_t i = 0;
  const std::size_t n = utf8.size();
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(utf8[i]);
    char32_t cp = 0;
    std::size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      throw InputError("invalid UTF-8 lead byte at byte offset " +
                       std::to_string(i));
    }
    if (i + len > n) {
      throw InputError("truncated UTF-8 sequence at byte offset " +
                       std::to_string(i));
    }
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(utf8[i + k]);
      if ((b & 0xC0) != 0x80) {
        throw InputError("invalid UTF-8 continuation byte at byte offset " +
                         std::to_string(i + k));
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    const bool overlong = (len == 2 && cp < 0x80) ||
                          (len == 3 && cp < 0x800) ||
                          (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      throw InputError("invalid UTF-8 scalar at byte offset " +
                       std::to_string(i));
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) append_utf8(out, cp);
  return out;
}

constexpr bool is_newline(char32_t c) {
  return c == U'\n' || c == 0x2028 || c == 0x2029;
}

constexpr bool is_space(char32_t c) {
  switch (c) {
    case U' ':
    case U'\t':
    case U'\n':
    case U'\r':
    case U'\f':
    case U'\v':
    case 0x0085:
    case 0x00A0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
    case 0xFEFF:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200B;
  }
}

constexpr bool is_ascii_alnum(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') ||
         (c >= U'0' && c <= U'9');
}

/// Punctuation and symbols: every visible ASCII non-alphanumeric plus the
/// common Latin-1, general-punctuation, CJK and fullwidth punctuation blocks.
constexpr bool is_punct(char32_t c) {
  if (c < 0x80) return c > U' ' && c < 0x7F && !is_ascii_alnum(c);
  if (is_space(c)) return false;
  if (c >= 0x00A1 && c <= 0x00BF) {
    // ª µ º and the superscript digits behave like letters.
    return c != 0x00AA && c != 0x00B5 && c != 0x00BA && c != 0x00B2 &&
           c != 0x00B3 && c != 0x00B9;
  }
  if (c == 0x00D7 || c == 0x00F7) return true;
  if (c >= 0x2010 && c <= 0x205E) return true;
  if (c >= 0x20A0 && c <= 0x20CF) return true;  // currency
  if (c >= 0x2190 && c <= 0x23FF) return true;  // arrows, math operators
  if (c >= 0x2500 && c <= 0x27BF) return true;  // box drawing, dingbats
  if (c >= 0x3000 && c <= 0x303F) return true;
  if (c >= 0xFF01 && c <= 0xFF0F) return true;
  if (c >= 0xFF1A && c <= 0xFF20) return true;
  return false;
}

constexpr bool is_control(char32_t c) {
  return (c < 0x20 || (c >= 0x7F && c < 0xA0)) && !is_space(c);
}

/// Letters, digits and any other non-space, non-punctuation scalar.
constexpr bool is_word_char(char32_t c) {
  return !is_space(c) && !is_punct(c) && !is_control(c);
}

constexpr bool is_apostrophe(char32_t c) { return c == U'\'' || c == 0x2019; }

constexpr bool is_hyphen(char32_t c) {
  return c == U'-' || c == 0x2010 || c == 0x2011;
}

constexpr char32_t to_lower(char32_t c) {
  if (c < 0x80) return (c >= U'A' && c <= U'Z') ? c + 0x20 : c;
  if (c >= 0x00C0 && c <= 0x00DE && c != 0x00D7) return c + 0x20;
  if (c >= 0x0100 && c <= 0x0137) return c | 1U;
  if (c >= 0x0139 && c <= 0x0148) return (c % 2 == 1) ? c + 1 : c;
  if (c >= 0x014A && c <= 0x0177) return c | 1U;
  if (c == 0x0178) return 0x00FF;
  if (c >= 0x0179 && c <= 0x017E) return (c % 2 == 1) ? c + 1 : c;
  if (c >= 0x0391 && c <= 0x03A9 && c != 0x03A2) return c + 0x20;
  if (c >= 0x0400 && c <= 0x040F) return c + 0x50;
  if (c >= 0x0410 && c <= 0x042F) return c + 0x20;
  return c;
}

inline std::string lower_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) append_utf8(out, to_lower(cp));
  return out;
}

}  // namespace abridger::unicode

#endif  // ABRIDGER_UNICODE_HPP
