#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace ddpdeid {

enum class Category { Username, Name, Email, Phone, Url, DdpId };

inline constexpr std::array<Category, 6> kAllCategories = {
    Category::DdpId, Category::Email, Category::Name,
    Category::Phone, Category::Url,   Category::Username};

std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view s);

// Fixed anonymization codes.
inline constexpr std::string_view kEmailCode = "__emailaddress";
inline constexpr std::string_view kPhoneCode = "__phonenumber";
inline constexpr std::string_view kUrlCode = "__url";

// `__` followed by 16 lowercase hex digits.
bool is_hashed_code(std::string_view s);
bool is_fixed_code(std::string_view s);

}  // namespace ddpdeid
