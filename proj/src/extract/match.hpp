#pragma once

#include <set>
#include <string>
#include <string_view>
#include <unordered_set>

#include "common/category.hpp"
#include "extract/lexical.hpp"

namespace ddpdeid {

enum class Rule {
  LabelValue,
  UsernameLabelTimestamp,
  ListWithTimestamp,
  FreeTextTag,
  FreeTextShare,
  NameList,
  ProfileName,
  ParticipantFile,
};

std::string_view to_string(Rule r);

struct PiiMatch {
  std::string value;  // verbatim
  Category category = Category::Username;
  std::string source;  // relative path inside the package
  Rule rule = Rule::LabelValue;
  // ProfileName only: the username whose code this value must share.
  std::string alias;

  bool operator==(const PiiMatch&) const = default;
  auto operator<=>(const PiiMatch&) const = default;
};

struct LabelConfig {
  std::set<std::string> sender_labels;  // lowercase
  std::set<std::string> exempt_labels;  // lowercase
  TimestampPolicy timestamps;

  static LabelConfig defaults();
  bool is_sender(std::string_view label) const;
  bool is_exempt(std::string_view label) const;
};

// Shared state for all extractors.
struct ExtractionContext {
  LabelConfig labels = LabelConfig::defaults();
  // Participant ids already used as replacement codes; never extracted.
  std::unordered_set<std::string> reserved_codes;

  // True for anything that is already a replacement code.
  bool is_code(std::string_view s) const;
  bool accepts_username(std::string_view s) const { return is_username_like(s) && !is_code(s); }
};

}  // namespace ddpdeid
