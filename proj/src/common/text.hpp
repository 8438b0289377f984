#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ddpdeid {

inline bool is_ascii_alpha(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool is_ascii_digit(unsigned char c) { return c >= '0' && c <= '9'; }
inline bool is_ascii_alnum(unsigned char c) {
  return is_ascii_alpha(c) || is_ascii_digit(c);
}
inline bool is_ascii_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }

// Bytes that belong to a "word" for whole-word matching. Non-ASCII bytes are
// word bytes so that a match never stops inside an accented name.
inline bool is_word_byte(unsigned char c) {
  return is_ascii_alnum(c) || c == '_' || c == '.' || c >= 0x80;
}

std::string ascii_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Strips trailing '.' so a sentence-final period does not glue onto a word.
std::string_view strip_trailing_periods(std::string_view s);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view data);

// One entry per line; blank lines and '#' comments skipped; CR and
// surrounding whitespace trimmed.
std::vector<std::string> load_list_file(const std::filesystem::path& path);

std::string to_hex(std::span<const std::uint8_t> bytes);
std::optional<std::vector<std::uint8_t>> from_hex(std::string_view hex);

// Minimal RFC 4180 field splitting (quoted fields, doubled quotes).
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

}  // namespace ddpdeid
