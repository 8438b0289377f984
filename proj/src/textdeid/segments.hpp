#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ddpdeid {

// A JSON string literal: its raw content range (quotes excluded) and the
// decoded UTF-8 text, with the raw offset at which each decoded byte's escape
// (or literal byte) begins. offsets.size() == decoded.size() + 1.
struct StringLiteral {
  std::size_t raw_begin = 0;
  std::size_t raw_end = 0;
  std::string decoded;
  std::vector<std::size_t> offsets;

  // Raw range covering decoded [begin, end); rounds outward to whole escapes.
  std::pair<std::size_t, std::size_t> raw_range(std::size_t begin, std::size_t end) const;
};

// All string literals (object keys included) in document order, or nullopt
// when the text does not lex as JSON strings (unterminated literal, bad
// escape, raw control byte).
std::optional<std::vector<StringLiteral>> lex_json_strings(std::string_view raw);

// Treats the whole text as one literal with identity offsets.
StringLiteral plain_segment(std::string_view raw);

}  // namespace ddpdeid
