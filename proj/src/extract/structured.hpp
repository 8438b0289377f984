#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "extract/match.hpp"

namespace ddpdeid {

using Json = nlohmann::ordered_json;

// The three structural username patterns, applied at every node:
//  - label on the sender list with a username-like value (or list of them)
//  - username-like label whose value is a timestamp
//  - list holding a timestamp: every other username-like string in it
// Pairs whose label is exempt contribute nothing, nor does their subtree.
std::vector<PiiMatch> extract_structured(const Json& doc, std::string_view source,
                                         const ExtractionContext& ctx);

// Visits every string value (not labels) in document order.
void for_each_string(const Json& doc, const std::function<void(const std::string&)>& fn);

}  // namespace ddpdeid
