#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "common/category.hpp"
#include "textdeid/lexicon.hpp"
#include "textdeid/patterns.hpp"

namespace ddpdeid {

enum class Boundary {
  Word,           // keys match as whole words
  PathComponent,  // keys match between non-alphanumerics ("_", "-", "." split)
};

enum class TextMode { Json, Plain };

struct Replacement {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string code;
  Category category = Category::Username;
};

using CategoryCounts = std::map<Category, std::size_t>;

// Non-overlapping replacements sorted by position. Order of precedence:
// literal fixed-code values, e-mail and Instagram URL patterns, key-map
// tokens (longest first), then phone numbers.
std::vector<Replacement> find_replacements(std::string_view text, const Lexicon& lexicon,
                                           const PatternSet& patterns,
                                           Boundary boundary = Boundary::Word);

std::string apply_replacements(std::string_view text, const std::vector<Replacement>& spans);

struct TextResult {
  std::string text;
  CategoryCounts counts;
  bool structured = false;  // false when JSON lexing failed and plain mode ran
};

// In JSON mode only the decoded contents of string literals are searched;
// everything between literals is copied byte for byte.
TextResult deidentify_text(std::string_view content, const Lexicon& lexicon,
                           const PatternSet& patterns, TextMode mode = TextMode::Json);

// Calls fn on each searchable segment (decoded string literals in JSON mode,
// the whole text otherwise).
void for_each_segment(std::string_view content, TextMode mode,
                      const std::function<void(std::string_view)>& fn);

enum class MatchRule { WordIgnoreCase, WordExact, Substring, SubstringIgnoreCase };

MatchRule residual_rule(Category c);

std::size_t count_in_segment(std::string_view text, std::string_view value, MatchRule rule);
std::size_t count_occurrences(std::string_view content, std::string_view value, MatchRule rule,
                              TextMode mode = TextMode::Json);

}  // namespace ddpdeid
