#include "extract/lexical.hpp"

#include "common/text.hpp"

namespace ddpdeid {
namespace {

bool take_digits(std::string_view s, std::size_t& pos, std::size_t n, int& value) {
  if (pos + n > s.size()) return false;
  value = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const char c = s[pos + i];
    if (!is_ascii_digit(static_cast<unsigned char>(c))) return false;
    value = value * 10 + (c - '0');
  }
  pos += n;
  return true;
}

bool take(std::string_view s, std::size_t& pos, char c) {
  if (pos < s.size() && s[pos] == c) {
    ++pos;
    return true;
  }
  return false;
}

int days_in_month(int year, int month) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  return month == 2 && leap ? 29 : kDays[month - 1];
}

}  // namespace

bool is_username_like(std::string_view s) {
  if (s.size() < kUsernameMinLength || s.size() > kUsernameMaxLength) return false;
  for (char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (!(is_ascii_alnum(u) || c == '_' || c == '.')) return false;
  }
  return true;
}

bool is_timestamp(std::string_view s, const TimestampPolicy& policy) {
  std::size_t pos = 0;
  int year, month, day, hour, minute, second = 0;
  if (!take_digits(s, pos, 4, year) || !take(s, pos, '-') || !take_digits(s, pos, 2, month) ||
      !take(s, pos, '-') || !take_digits(s, pos, 2, day)) {
    return false;
  }
  if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month)) return false;

  if (pos >= s.size()) return false;
  const char sep = s[pos++];
  if (!((sep == 'T' && policy.allow_t_separator) || (sep == ' ' && policy.allow_space_separator))) {
    return false;
  }
  if (!take_digits(s, pos, 2, hour) || !take(s, pos, ':') || !take_digits(s, pos, 2, minute)) {
    return false;
  }
  if (hour > 23 || minute > 59) return false;
  if (take(s, pos, ':')) {
    if (!take_digits(s, pos, 2, second) || second > 60) return false;
    if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
      if (!policy.allow_fraction) return false;
      ++pos;
      const std::size_t start = pos;
      while (pos < s.size() && is_ascii_digit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos == start) return false;
    }
  } else if (policy.require_seconds) {
    return false;
  }

  if (pos == s.size()) return true;
  if (!policy.allow_offset) return false;
  if (s[pos] == 'Z') return pos + 1 == s.size();
  if (s[pos] != '+' && s[pos] != '-') return false;
  ++pos;
  int oh, om = 0;
  if (!take_digits(s, pos, 2, oh) || oh > 23) return false;
  if (pos == s.size()) return true;
  take(s, pos, ':');
  if (!take_digits(s, pos, 2, om) || om > 59) return false;
  return pos == s.size();
}

}  // namespace ddpdeid
