#include "textdeid/lexicon.hpp"

#include <algorithm>

#include "common/text.hpp"
#include "common/words.hpp"

namespace ddpdeid {
namespace {

std::size_t word_run_end(std::string_view text, std::size_t pos) {
  while (pos < text.size() && is_word_at(text, pos)) ++pos;
  return pos;
}

bool longer(const std::string& a, const std::string& b) {
  return a.size() != b.size() ? a.size() > b.size() : a < b;
}

}  // namespace

Lexicon::Lexicon(const KeyMap& map, bool cap_sensitive) : cap_sensitive_(cap_sensitive) {
  for (const auto& [key, entry] : map.entries()) {
    LexEntry lex{ascii_lower(key.value), entry.code, entry.category, key.cls == KeyClass::Name};
    if (lex.key.empty()) continue;
    if (key.cls != KeyClass::User && key.cls != KeyClass::Name) {
      if (key.cls == KeyClass::Phone) lex.key = key.value;
      literals_.push_back(std::move(lex));
      continue;
    }
    const std::size_t first_end = word_run_end(lex.key, 0);
    if (first_end == 0) continue;  // cannot start a word
    if (first_end < lex.key.size()) multi_[lex.key.substr(0, first_end)].push_back(lex.key);
    max_key_ = std::max(max_key_, lex.key.size());
    by_key_[lex.key].push_back(std::move(lex));
  }
  for (auto& [_, entries] : by_key_) {
    std::stable_sort(entries.begin(), entries.end(), [](const LexEntry& a, const LexEntry& b) {
      return !a.name_class && b.name_class;
    });
  }
  for (auto& [_, keys] : multi_) {
    std::sort(keys.begin(), keys.end(), longer);
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  }
  std::sort(literals_.begin(), literals_.end(),
            [](const LexEntry& a, const LexEntry& b) { return longer(a.key, b.key); });
}

const LexEntry* Lexicon::accept(std::string_view lower_key, std::string_view original) const {
  auto it = by_key_.find(std::string(lower_key));
  if (it == by_key_.end()) return nullptr;
  for (const LexEntry& e : it->second) {
    if (e.name_class && cap_sensitive_ && !is_ascii_upper(static_cast<unsigned char>(original[0]))) {
      continue;
    }
    return &e;
  }
  return nullptr;
}

Lexicon::Hit Lexicon::match_word(std::string_view text, std::size_t pos) const {
  if (by_key_.empty()) return {};
  const std::size_t run_end = word_run_end(text, pos);
  if (run_end == pos) return {};
  const std::string run = ascii_lower(text.substr(pos, run_end - pos));

  Hit best;
  if (auto m = multi_.find(run); m != multi_.end()) {
    for (const std::string& key : m->second) {
      if (pos + key.size() > text.size()) continue;
      const std::string_view cand = text.substr(pos, key.size());
      if (!iequals(cand, key) || !ends_word(text, pos + key.size())) continue;
      if (const LexEntry* e = accept(key, cand)) {
        best = {e, key.size()};
        break;
      }
    }
  }
  // The run itself, then with trailing periods peeled off one at a time.
  for (std::size_t len = run.size(); len > best.length; --len) {
    if (len < run.size() && run[len] != '.') break;
    if (const LexEntry* e = accept(std::string_view(run).substr(0, len), text.substr(pos, len))) {
      best = {e, len};
      break;
    }
  }
  return best;
}

Lexicon::Hit Lexicon::match_component(std::string_view text, std::size_t pos) const {
  if (by_key_.empty()) return {};
  const std::size_t limit = std::min(text.size(), pos + max_key_);
  for (std::size_t end = limit; end > pos; --end) {
    if (end < text.size() && is_ascii_alnum(static_cast<unsigned char>(text[end]))) continue;
    const std::string_view cand = text.substr(pos, end - pos);
    if (const LexEntry* e = accept(ascii_lower(cand), cand)) return {e, end - pos};
  }
  return {};
}

}  // namespace ddpdeid
