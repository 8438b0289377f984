#include "textdeid/segments.hpp"

#include <cstdint>

namespace ddpdeid {
namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::optional<std::uint32_t> read_u16(std::string_view raw, std::size_t pos) {
  if (pos + 4 > raw.size()) return std::nullopt;
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const int h = hex_value(raw[pos + i]);
    if (h < 0) return std::nullopt;
    v = v * 16 + static_cast<std::uint32_t>(h);
  }
  return v;
}

void append_utf8(std::string& out, std::uint32_t cp) {
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

// Decodes one literal starting after its opening quote. Returns the position
// of the closing quote, or npos on malformed input.
std::size_t decode_literal(std::string_view raw, std::size_t pos, StringLiteral& lit) {
  while (pos < raw.size()) {
    const char c = raw[pos];
    if (c == '"') return pos;
    if (static_cast<unsigned char>(c) < 0x20) return std::string_view::npos;
    const std::size_t unit = pos;
    const std::size_t before = lit.decoded.size();
    if (c != '\\') {
      lit.decoded.push_back(c);
      ++pos;
    } else {
      if (pos + 1 >= raw.size()) return std::string_view::npos;
      const char e = raw[pos + 1];
      pos += 2;
      switch (e) {
        case '"': lit.decoded.push_back('"'); break;
        case '\\': lit.decoded.push_back('\\'); break;
        case '/': lit.decoded.push_back('/'); break;
        case 'b': lit.decoded.push_back('\b'); break;
        case 'f': lit.decoded.push_back('\f'); break;
        case 'n': lit.decoded.push_back('\n'); break;
        case 'r': lit.decoded.push_back('\r'); break;
        case 't': lit.decoded.push_back('\t'); break;
        case 'u': {
          auto hi = read_u16(raw, pos);
          if (!hi) return std::string_view::npos;
          pos += 4;
          std::uint32_t cp = *hi;
          if (cp >= 0xD800 && cp <= 0xDBFF && pos + 1 < raw.size() && raw[pos] == '\\' &&
              raw[pos + 1] == 'u') {
            auto lo = read_u16(raw, pos + 2);
            if (lo && *lo >= 0xDC00 && *lo <= 0xDFFF) {
              cp = 0x10000 + ((cp - 0xD800) << 10) + (*lo - 0xDC00);
              pos += 6;
            }
          }
          // Lone surrogates decode to U+FFFD; the raw bytes stay untouched
          // unless a replacement covers them.
          if (cp >= 0xD800 && cp <= 0xDFFF) cp = 0xFFFD;
          append_utf8(lit.decoded, cp);
          break;
        }
        default: return std::string_view::npos;
      }
    }
    lit.offsets.insert(lit.offsets.end(), lit.decoded.size() - before, unit);
  }
  return std::string_view::npos;
}

}  // namespace

std::pair<std::size_t, std::size_t> StringLiteral::raw_range(std::size_t begin,
                                                              std::size_t end) const {
  while (end < decoded.size() && end > 0 && offsets[end] == offsets[end - 1]) ++end;
  return {offsets[begin], offsets[end]};
}

std::optional<std::vector<StringLiteral>> lex_json_strings(std::string_view raw) {
  std::vector<StringLiteral> out;
  std::size_t pos = 0;
  while ((pos = raw.find('"', pos)) != std::string_view::npos) {
    StringLiteral lit;
    lit.raw_begin = pos + 1;
    const std::size_t close = decode_literal(raw, pos + 1, lit);
    if (close == std::string_view::npos) return std::nullopt;
    lit.raw_end = close;
    lit.offsets.push_back(close);
    out.push_back(std::move(lit));
    pos = close + 1;
  }
  return out;
}

StringLiteral plain_segment(std::string_view raw) {
  StringLiteral lit;
  lit.raw_begin = 0;
  lit.raw_end = raw.size();
  lit.decoded = std::string(raw);
  lit.offsets.resize(raw.size() + 1);
  for (std::size_t i = 0; i <= raw.size(); ++i) lit.offsets[i] = i;
  return lit;
}

}  // namespace ddpdeid
