#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "common/category.hpp"
#include "keymap/keymap.hpp"

namespace ddpdeid {

struct LexEntry {
  std::string key;  // lowercase
  std::string code;
  Category category = Category::Username;
  bool name_class = false;
};

// Read-only lookup structure over a key map. Username-class keys match
// case-insensitively; name keys too, unless cap-sensitive, in which case the
// first letter must be an uppercase ASCII letter.
class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(const KeyMap& map, bool cap_sensitive);

  struct Hit {
    const LexEntry* entry = nullptr;
    std::size_t length = 0;
  };

  // Longest key starting at a word start `pos` and ending at a word end.
  Hit match_word(std::string_view text, std::size_t pos) const;
  // Longest key starting at `pos` whose right neighbour is not alphanumeric.
  Hit match_component(std::string_view text, std::size_t pos) const;

  // Fixed-code values from the map (profile e-mail, phone, website), longest
  // first; matched literally, ignoring case except for phones.
  const std::vector<LexEntry>& literals() const { return literals_; }

  bool cap_sensitive() const { return cap_sensitive_; }
  std::size_t size() const { return by_key_.size(); }

 private:
  const LexEntry* accept(std::string_view lower_key, std::string_view original) const;

  std::unordered_map<std::string, std::vector<LexEntry>> by_key_;  // user class first
  // keys containing non-word bytes, indexed by their first word run
  std::unordered_map<std::string, std::vector<std::string>> multi_;
  std::vector<LexEntry> literals_;
  std::size_t max_key_ = 0;
  bool cap_sensitive_ = false;
};

}  // namespace ddpdeid
