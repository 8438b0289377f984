#include "extract/profile.hpp"

#include <spdlog/spdlog.h>

#include <optional>

#include "common/text.hpp"

namespace ddpdeid {
namespace {

// Accepts both flat exports ({"name": "..."}) and newer ones that wrap values
// ({"Name": {"value": "..."}}). Returns the first hit in document order.
std::optional<std::string> find_label(const Json& node, std::initializer_list<std::string_view> labels) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      for (std::string_view want : labels) {
        if (!iequals(key, want)) continue;
        if (value.is_string() && !value.get_ref<const std::string&>().empty()) {
          return value.get<std::string>();
        }
        if (value.is_object() && value.contains("value") && value["value"].is_string() &&
            !value["value"].get_ref<const std::string&>().empty()) {
          return value["value"].get<std::string>();
        }
      }
    }
    for (const auto& [key, value] : node.items()) {
      if (auto hit = find_label(value, labels)) return hit;
    }
  } else if (node.is_array()) {
    for (const Json& child : node) {
      if (auto hit = find_label(child, labels)) return hit;
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<PiiMatch> extract_profile(const Json& profile, std::string_view source,
                                      const ExtractionContext& ctx) {
  std::vector<PiiMatch> out;
  const std::string src(source);

  std::string owner;
  if (auto username = find_label(profile, {"username"})) {
    if (ctx.accepts_username(*username)) {
      owner = *username;
      out.push_back(PiiMatch{owner, Category::DdpId, src, Rule::LabelValue, {}});
    }
  } else {
    spdlog::warn("{}: profile has no username", src);
  }

  if (auto name = find_label(profile, {"name"})) {
    if (!ctx.is_code(*name)) {
      out.push_back(PiiMatch{*name, Category::Name, src, Rule::ProfileName, ascii_lower(owner)});
    }
  }

  const auto add = [&](std::initializer_list<std::string_view> labels, Category cat) {
    if (auto v = find_label(profile, labels)) {
      if (!ctx.is_code(*v)) out.push_back(PiiMatch{*v, cat, src, Rule::LabelValue, {}});
    }
  };
  add({"email"}, Category::Email);
  add({"phone_number", "phone"}, Category::Phone);
  add({"website"}, Category::Url);
  return out;
}

}  // namespace ddpdeid
