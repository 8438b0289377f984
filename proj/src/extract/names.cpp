#include "extract/names.hpp"

#include <algorithm>

#include "common/text.hpp"
#include "common/words.hpp"

namespace ddpdeid {

NameList::NameList(const std::vector<std::string>& names, bool cap_sensitive)
    : cap_sensitive_(cap_sensitive) {
  for (const std::string& raw : names) {
    std::string n = ascii_lower(trim(raw));
    if (n.empty()) continue;
    if (std::find(kPruned.begin(), kPruned.end(), n) != kPruned.end()) continue;
    const bool simple = std::all_of(n.begin(), n.end(), [](char c) {
      return is_word_byte(static_cast<unsigned char>(c)) && c != '.';
    });
    if (!simple && std::find(compound_.begin(), compound_.end(), n) == compound_.end()) {
      compound_.push_back(n);
    }
    names_.insert(std::move(n));
  }
  std::sort(compound_.begin(), compound_.end(),
            [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
}

NameList NameList::load(const std::filesystem::path& path, bool cap_sensitive) {
  return NameList(load_list_file(path), cap_sensitive);
}

bool NameList::contains(std::string_view word) const {
  return names_.contains(ascii_lower(word));
}

std::vector<PiiMatch> scan_names(std::string_view text, std::string_view source,
                                 const NameList& names) {
  std::vector<PiiMatch> out;
  const auto accept = [&](std::size_t begin, std::size_t end) {
    if (names.cap_sensitive() && !is_ascii_upper(static_cast<unsigned char>(text[begin]))) return;
    out.push_back(PiiMatch{std::string(text.substr(begin, end - begin)), Category::Name,
                           std::string(source), Rule::NameList, {}});
  };

  for_each_word(text, [&](std::size_t begin, std::size_t end) {
    if (names.names_.contains(ascii_lower(text.substr(begin, end - begin)))) accept(begin, end);
  });

  if (!names.compound_.empty()) {
    const std::string lower = ascii_lower(text);
    for (const std::string& name : names.compound_) {
      for (std::size_t pos = lower.find(name); pos != std::string::npos;
           pos = lower.find(name, pos + 1)) {
        if (starts_word(text, pos) && ends_word(text, pos + name.size())) {
          accept(pos, pos + name.size());
        }
      }
    }
  }
  return out;
}

}  // namespace ddpdeid
