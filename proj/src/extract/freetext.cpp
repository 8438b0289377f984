#include "extract/freetext.hpp"

#include <boost/regex.hpp>

#include "common/text.hpp"
#include "common/words.hpp"

namespace ddpdeid {
namespace {

bool is_username_byte(unsigned char c) { return is_ascii_alnum(c) || c == '_' || c == '.'; }

// Characters that may precede '@' inside an e-mail address.
bool is_email_local_byte(unsigned char c) {
  return is_ascii_alnum(c) || c == '.' || c == '_' || c == '%' || c == '+' || c == '-';
}

}  // namespace

std::vector<PiiMatch> extract_freetext_usernames(std::string_view text, std::string_view source,
                                                 const ExtractionContext& ctx) {
  std::vector<PiiMatch> out;

  for (std::size_t at = text.find('@'); at != std::string_view::npos;
       at = text.find('@', at + 1)) {
    if (at > 0 && is_email_local_byte(static_cast<unsigned char>(text[at - 1]))) continue;
    std::size_t end = at + 1;
    while (end < text.size() && is_username_byte(static_cast<unsigned char>(text[end]))) ++end;
    if (end < text.size() && static_cast<unsigned char>(text[end]) >= 0x80 && is_word_at(text, end)) continue;
    const std::string_view name = strip_trailing_periods(text.substr(at + 1, end - at - 1));
    if (ctx.accepts_username(name)) {
      out.push_back(PiiMatch{std::string(name), Category::Username, std::string(source),
                             Rule::FreeTextTag, {}});
    }
  }

  static const boost::regex share(
      R"((?<![A-Za-z0-9_.])[Ss]hared ([A-Za-z0-9_.]{3,30})(?:'|\xE2\x80\x99)s story)");
  for (boost::cregex_iterator it(text.data(), text.data() + text.size(), share), end; it != end;
       ++it) {
    const std::string name = (*it)[1].str();
    if (ctx.accepts_username(name)) {
      out.push_back(PiiMatch{name, Category::Username, std::string(source), Rule::FreeTextShare, {}});
    }
  }
  return out;
}

}  // namespace ddpdeid
