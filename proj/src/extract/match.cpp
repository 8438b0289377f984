#include "extract/match.hpp"

#include "common/text.hpp"

namespace ddpdeid {

std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::LabelValue: return "label_value";
    case Rule::UsernameLabelTimestamp: return "username_label_timestamp";
    case Rule::ListWithTimestamp: return "list_with_timestamp";
    case Rule::FreeTextTag: return "free_text_tag";
    case Rule::FreeTextShare: return "free_text_share";
    case Rule::NameList: return "name_list";
    case Rule::ProfileName: return "profile_name";
    case Rule::ParticipantFile: return "participant_file";
  }
  return "unknown";
}

LabelConfig LabelConfig::defaults() {
  LabelConfig cfg;
  cfg.sender_labels = {"sender", "username", "user", "author", "participants", "owner"};
  cfg.exempt_labels = {"media_url", "taken_at", "caption", "type", "device_id",
                       "created_at", "timestamp", "date_joined"};
  return cfg;
}

bool LabelConfig::is_sender(std::string_view label) const {
  return sender_labels.contains(ascii_lower(label));
}

bool LabelConfig::is_exempt(std::string_view label) const {
  return exempt_labels.contains(ascii_lower(label));
}

bool ExtractionContext::is_code(std::string_view s) const {
  return is_hashed_code(s) || is_fixed_code(s) || reserved_codes.contains(std::string(s));
}

}  // namespace ddpdeid
