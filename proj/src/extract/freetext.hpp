#pragma once

#include <string_view>
#include <vector>

#include "extract/match.hpp"

namespace ddpdeid {

// Usernames mentioned in free text: `@username` tags and
// "Shared <username>'s story" (straight or typographic apostrophe).
std::vector<PiiMatch> extract_freetext_usernames(std::string_view text, std::string_view source,
                                                 const ExtractionContext& ctx = {});

}  // namespace ddpdeid
