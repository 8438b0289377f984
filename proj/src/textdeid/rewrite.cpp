#include "textdeid/rewrite.hpp"

#include <algorithm>

#include "common/text.hpp"
#include "common/words.hpp"
#include "textdeid/segments.hpp"

namespace ddpdeid {
namespace {

class SpanSet {
 public:
  explicit SpanSet(std::size_t n) : taken_(n, false) {}

  bool free(std::size_t b, std::size_t e) const {
    return std::none_of(taken_.begin() + static_cast<std::ptrdiff_t>(b),
                        taken_.begin() + static_cast<std::ptrdiff_t>(e), [](bool t) { return t; });
  }
  void take(Replacement r) {
    std::fill(taken_.begin() + static_cast<std::ptrdiff_t>(r.begin),
              taken_.begin() + static_cast<std::ptrdiff_t>(r.end), true);
    spans_.push_back(std::move(r));
  }
  // Copy of text with every taken byte replaced by `mask`.
  std::string masked(std::string_view text, char mask) const {
    std::string out(text);
    for (std::size_t i = 0; i < out.size(); ++i)
      if (taken_[i]) out[i] = mask;
    return out;
  }
  std::vector<Replacement> release() {
    std::sort(spans_.begin(), spans_.end(),
              [](const Replacement& a, const Replacement& b) { return a.begin < b.begin; });
    return std::move(spans_);
  }

 private:
  std::vector<bool> taken_;
  std::vector<Replacement> spans_;
};

bool alnum_at(std::string_view s, std::size_t i) {
  return i < s.size() && is_ascii_alnum(static_cast<unsigned char>(s[i]));
}

void regex_pass(std::string_view text, SpanSet& spans, const boost::regex& re, char mask,
                std::string_view code, Category category) {
  const std::string work = spans.masked(text, mask);
  for (boost::sregex_iterator it(work.begin(), work.end(), re), end; it != end; ++it) {
    const auto b = static_cast<std::size_t>(it->position());
    const auto e = b + static_cast<std::size_t>(it->length());
    if (e > b && spans.free(b, e)) spans.take({b, e, std::string(code), category});
  }
}

}  // namespace

std::vector<Replacement> find_replacements(std::string_view text, const Lexicon& lexicon,
                                           const PatternSet& patterns, Boundary boundary) {
  SpanSet spans(text.size());

  if (!lexicon.literals().empty()) {
    const std::string lower = ascii_lower(text);
    for (const LexEntry& lit : lexicon.literals()) {
      const std::string_view hay = lit.category == Category::Phone ? text : std::string_view(lower);
      for (std::size_t pos = hay.find(lit.key); pos != std::string_view::npos;
           pos = hay.find(lit.key, pos + 1)) {
        const std::size_t end = pos + lit.key.size();
        if ((pos > 0 && alnum_at(text, pos - 1)) || alnum_at(text, end)) continue;
        if (spans.free(pos, end)) spans.take({pos, end, lit.code, lit.category});
      }
    }
  }

  regex_pass(text, spans, patterns.email(), ' ', kEmailCode, Category::Email);
  regex_pass(text, spans, patterns.url(), ' ', kUrlCode, Category::Url);

  if (lexicon.size() > 0) {
    const std::string work = spans.masked(text, ' ');
    std::size_t pos = 0;
    while (pos < work.size()) {
      const bool at_start = boundary == Boundary::Word
                                ? starts_word(work, pos) &&
                                      is_word_at(work, pos)
                                : (pos == 0 || !alnum_at(work, pos - 1)) && work[pos] != ' ';
      if (at_start) {
        const auto hit = boundary == Boundary::Word ? lexicon.match_word(work, pos)
                                                    : lexicon.match_component(work, pos);
        if (hit.entry != nullptr) {
          spans.take({pos, pos + hit.length, hit.entry->code, hit.entry->category});
          pos += hit.length;
          continue;
        }
      }
      if (boundary == Boundary::Word && is_word_at(work, pos)) {
        while (pos < work.size() && is_word_at(work, pos)) ++pos;
      } else {
        ++pos;
      }
    }
  }

  regex_pass(text, spans, patterns.phone(), 'x', kPhoneCode, Category::Phone);
  return spans.release();
}

std::string apply_replacements(std::string_view text, const std::vector<Replacement>& spans) {
  std::string out;
  out.reserve(text.size());
  std::size_t last = 0;
  for (const Replacement& r : spans) {
    out.append(text.substr(last, r.begin - last));
    out += r.code;
    last = r.end;
  }
  out.append(text.substr(last));
  return out;
}

TextResult deidentify_text(std::string_view content, const Lexicon& lexicon,
                           const PatternSet& patterns, TextMode mode) {
  TextResult result;
  std::optional<std::vector<StringLiteral>> literals;
  if (mode == TextMode::Json) literals = lex_json_strings(content);
  result.structured = literals.has_value();
  if (!literals) literals = std::vector<StringLiteral>{plain_segment(content)};

  std::size_t last = 0;
  for (const StringLiteral& lit : *literals) {
    for (const Replacement& r : find_replacements(lit.decoded, lexicon, patterns)) {
      const auto [rb, re] = lit.raw_range(r.begin, r.end);
      result.text.append(content.substr(last, rb - last));
      result.text += r.code;
      last = re;
      ++result.counts[r.category];
    }
  }
  result.text.append(content.substr(last));
  return result;
}

void for_each_segment(std::string_view content, TextMode mode,
                      const std::function<void(std::string_view)>& fn) {
  if (mode == TextMode::Json) {
    if (auto literals = lex_json_strings(content)) {
      for (const StringLiteral& lit : *literals) fn(lit.decoded);
      return;
    }
  }
  fn(content);
}

MatchRule residual_rule(Category c) {
  switch (c) {
    case Category::Username:
    case Category::DdpId: return MatchRule::WordIgnoreCase;
    case Category::Name: return MatchRule::WordExact;
    case Category::Email:
    case Category::Url: return MatchRule::SubstringIgnoreCase;
    case Category::Phone: return MatchRule::Substring;
  }
  return MatchRule::Substring;
}

std::size_t count_in_segment(std::string_view text, std::string_view value, MatchRule rule) {
  if (value.empty() || value.size() > text.size()) return 0;
  std::string lower_text;
  std::string lower_value;
  std::string_view hay = text;
  std::string_view needle = value;
  if (rule == MatchRule::WordIgnoreCase || rule == MatchRule::SubstringIgnoreCase) {
    lower_text = ascii_lower(text);
    lower_value = ascii_lower(value);
    hay = lower_text;
    needle = lower_value;
  }
  const bool word = rule == MatchRule::WordIgnoreCase || rule == MatchRule::WordExact;
  std::size_t n = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string_view::npos;
       pos = hay.find(needle, pos + 1)) {
    if (word && (!starts_word(text, pos) || !ends_word(text, pos + needle.size()))) continue;
    ++n;
  }
  return n;
}

std::size_t count_occurrences(std::string_view content, std::string_view value, MatchRule rule,
                              TextMode mode) {
  std::size_t n = 0;
  for_each_segment(content, mode, [&](std::string_view seg) { n += count_in_segment(seg, value, rule); });
  return n;
}

}  // namespace ddpdeid
