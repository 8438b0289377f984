#pragma once

#include <string_view>
#include <vector>

#include "extract/match.hpp"
#include "extract/structured.hpp"

namespace ddpdeid {

// The profile file names its owner. Emits the username as DdpId, the full
// display name as a ProfileName match aliased to that username, and any
// e-mail, phone number and website under their own categories.
std::vector<PiiMatch> extract_profile(const Json& profile, std::string_view source,
                                      const ExtractionContext& ctx = {});

inline bool is_profile_file(std::string_view rel_path) {
  const std::size_t slash = rel_path.rfind('/');
  const std::string_view base =
      slash == std::string_view::npos ? rel_path : rel_path.substr(slash + 1);
  return base == "profile.json";
}

}  // namespace ddpdeid
