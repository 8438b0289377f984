#include "common/category.hpp"

#include "common/text.hpp"

namespace ddpdeid {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Username: return "username";
    case Category::Name: return "name";
    case Category::Email: return "email";
    case Category::Phone: return "phone";
    case Category::Url: return "url";
    case Category::DdpId: return "ddp_id";
  }
  return "unknown";
}

std::optional<Category> parse_category(std::string_view s) {
  const std::string lower = ascii_lower(s);
  if (lower == "username") return Category::Username;
  if (lower == "name") return Category::Name;
  if (lower == "email" || lower == "e-mail") return Category::Email;
  if (lower == "phone") return Category::Phone;
  if (lower == "url") return Category::Url;
  if (lower == "ddp_id" || lower == "ddpid") return Category::DdpId;
  return std::nullopt;
}

bool is_hashed_code(std::string_view s) {
  if (s.size() != 18 || s[0] != '_' || s[1] != '_') return false;
  for (char c : s.substr(2)) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

bool is_fixed_code(std::string_view s) {
  return s == kEmailCode || s == kPhoneCode || s == kUrlCode;
}

}  // namespace ddpdeid
