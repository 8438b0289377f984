#pragma once

#include <string_view>

namespace ddpdeid {

inline constexpr std::size_t kUsernameMinLength = 3;
inline constexpr std::size_t kUsernameMaxLength = 30;

// 3 to 30 characters from [A-Za-z0-9_.].
bool is_username_like(std::string_view s);

// Which ISO-8601 shapes count as a timestamp. The date part is always
// YYYY-MM-DD; everything else is switchable.
struct TimestampPolicy {
  bool allow_t_separator = true;
  bool allow_space_separator = true;
  bool require_seconds = false;
  bool allow_fraction = true;
  bool allow_offset = true;  // Z, +hh:mm, +hhmm, +hh
};

bool is_timestamp(std::string_view s, const TimestampPolicy& policy = {});

}  // namespace ddpdeid
