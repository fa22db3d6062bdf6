#pragma once

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace yall {

inline constexpr char32_t kRightSingleQuote = 0x2019;

inline bool is_valid_utf8(std::string_view s) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(s.data());
  const auto len = static_cast<std::int32_t>(s.size());
  std::int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(p, i, len, c);
    if (c < 0) return false;
  }
  return true;
}

// Decodes one code point at byte offset `i` and advances `i`. Invalid
// sequences decode as U+FFFD.
inline char32_t next_code_point(std::string_view s, std::size_t& i) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(s.data());
  auto pos = static_cast<std::int32_t>(i);
  UChar32 c;
  U8_NEXT_OR_FFFD(p, pos, static_cast<std::int32_t>(s.size()), c);
  i = static_cast<std::size_t>(pos);
  return static_cast<char32_t>(c);
}

inline void append_utf8(std::string& out, char32_t c) {
  std::uint8_t buf[U8_MAX_LENGTH];
  std::int32_t n = 0;
  UBool error = false;
  U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
  if (!error) out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

inline bool is_apostrophe(char32_t c) { return c == U'\'' || c == kRightSingleQuote; }

inline bool is_hyphen(char32_t c) { return c == U'-' || c == 0x2010 || c == 0x2011; }

// Letters, digits, combining marks, apostrophes and hyphens form words.
inline bool is_word_char(char32_t c) {
  const auto uc = static_cast<UChar32>(c);
  if (c < 0x80) {
    return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9') ||
           c == U'\'' || c == U'-';
  }
  return u_isalnum(uc) || (U_GET_GC_MASK(uc) & U_GC_M_MASK) != 0 || is_apostrophe(c) ||
         is_hyphen(c);
}

inline bool is_space(char32_t c) {
  if (c < 0x80) return c == U' ' || (c >= U'\t' && c <= U'\r');
  return u_isUWhiteSpace(static_cast<UChar32>(c));
}

inline bool starts_with_upper(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = 0;
  return u_isupper(static_cast<UChar32>(next_code_point(s, i)));
}

inline std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || (s[b] >= '\t' && s[b] <= '\r'))) ++b;
  std::size_t e = s.size();
  while (e > b && (s[e - 1] == ' ' || (s[e - 1] >= '\t' && s[e - 1] <= '\r'))) --e;
  return s.substr(b, e - b);
}

inline bool is_blank(std::string_view s) {
  for (std::size_t i = 0; i < s.size();) {
    if (!is_space(next_code_point(s, i))) return false;
  }
  return true;
}

// Unicode simple case folding, code point by code point. Text containing
// combining marks is brought to NFC first so that decomposed accents
// compare equal to precomposed ones.
inline std::string fold_case(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool has_marks = false;
  for (std::size_t i = 0; i < s.size();) {
    const char32_t c = next_code_point(s, i);
    if (c < 0x80) {
      out.push_back(static_cast<char>(c >= U'A' && c <= U'Z' ? c + 32 : c));
      continue;
    }
    if (U_GET_GC_MASK(static_cast<UChar32>(c)) & U_GC_M_MASK) has_marks = true;
    append_utf8(out, static_cast<char32_t>(u_foldCase(static_cast<UChar32>(c), U_FOLD_CASE_DEFAULT)));
  }
  if (has_marks) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_SUCCESS(status)) {
      icu::UnicodeString normalized = nfc->normalize(icu::UnicodeString::fromUTF8(out), status);
      if (U_SUCCESS(status)) {
        std::string composed;
        normalized.toUTF8String(composed);
        return composed;
      }
    }
  }
  return out;
}

inline std::string normalize_apostrophes(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const std::size_t start = i;
    const char32_t c = next_code_point(s, i);
    if (c == kRightSingleQuote) {
      out.push_back('\'');
    } else {
      out.append(s.substr(start, i - start));
    }
  }
  return out;
}

struct Token {
  std::string text;   // exact bytes from the source
  std::size_t begin;  // byte offsets into the source, [begin, end)
  std::size_t end;
};

// Words are maximal runs of word characters; every other non-space code
// point is a token of its own.
inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t start = i;
    const char32_t c = next_code_point(text, i);
    if (is_space(c)) continue;
    if (is_word_char(c)) {
      std::size_t j = i;
      while (j < text.size()) {
        std::size_t k = j;
        if (!is_word_char(next_code_point(text, k))) break;
        j = k;
      }
      i = j;
    }
    tokens.push_back(Token{std::string(text.substr(start, i - start)), start, i});
  }
  return tokens;
}

// Matching key: case-folded with curly apostrophes straightened.
inline std::string token_key(std::string_view token) {
  return normalize_apostrophes(fold_case(token));
}

inline bool is_you(std::string_view token) {
  if (token.size() != 3) return false;
  return (token[0] | 0x20) == 'y' && (token[1] | 0x20) == 'o' && (token[2] | 0x20) == 'u';
}

}  // namespace yall
