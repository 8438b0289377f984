#pragma once

#include <cstddef>
#include <string_view>

#include "common/text.hpp"

namespace ddpdeid {

// Typographic quotes (U+2018, U+2019, U+201C, U+201D) separate words even
// though their UTF-8 bytes are non-ASCII: "jdoe_99’s" holds "jdoe_99".
inline bool is_word_at(std::string_view text, std::size_t i) {
  const auto c = static_cast<unsigned char>(text[i]);
  if (c < 0x80) return is_word_byte(c);
  for (std::size_t s = i >= 2 ? i - 2 : 0; s <= i; ++s) {
    if (s + 2 < text.size() && static_cast<unsigned char>(text[s]) == 0xE2 &&
        static_cast<unsigned char>(text[s + 1]) == 0x80) {
      const auto t = static_cast<unsigned char>(text[s + 2]);
      if (t == 0x98 || t == 0x99 || t == 0x9C || t == 0x9D) return false;
    }
  }
  return true;
}

inline bool starts_word(std::string_view text, std::size_t pos) {
  return pos == 0 || !is_word_at(text, pos - 1);
}

// A word may end where the text ends, before a non-word byte, or before a run
// of periods that itself ends the word ("Jan." ends the word "Jan").
inline bool ends_word(std::string_view text, std::size_t pos) {
  while (pos < text.size() && text[pos] == '.') ++pos;
  return pos == text.size() || !is_word_at(text, pos);
}

// Calls fn(begin, end) for every maximal run of word bytes, with trailing
// periods trimmed off the reported range.
template <typename Fn>
void for_each_word(std::string_view text, Fn&& fn) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_word_at(text, i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_word_at(text, j)) ++j;
    std::size_t end = j;
    while (end > i && text[end - 1] == '.') --end;
    if (end > i) fn(i, end);
    i = j;
  }
}

}  // namespace ddpdeid
