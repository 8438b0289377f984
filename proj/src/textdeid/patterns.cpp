#include "textdeid/patterns.hpp"

#include "common/errors.hpp"

namespace ddpdeid {

PatternSource PatternSource::defaults() {
  return PatternSource{
      R"((?<![A-Za-z0-9._%+-])[A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)+)",
      // 9 to 15 digits, single space or dash between groups. Not glued to
      // words, times (12:00), decimals or URL parameters.
      R"((?<![\w+:./=&?#%])\+?\d(?:[ -]?\d){8,14}(?![\w:]|\.\d))",
      R"((?<![\w.@/-])(?:https?://)?(?:[a-z0-9-]+\.)*instagram\.com(?:/(?:[^\s"'<>\\]*[^\s"'<>\\.,;:!?)\]])?)?(?![\w-]))",
  };
}

namespace {

boost::regex compile(const std::string& expr, const char* what, bool icase) {
  try {
    boost::regex::flag_type flags = boost::regex::perl;
    if (icase) flags |= boost::regex::icase;
    return boost::regex(expr, flags);
  } catch (const boost::regex_error& e) {
    throw InputError(std::string("invalid ") + what + " pattern: " + e.what());
  }
}

}  // namespace

PatternSet::PatternSet(PatternSource source)
    : source_(std::move(source)),
      email_(compile(source_.email, "email", false)),
      phone_(compile(source_.phone, "phone", false)),
      url_(compile(source_.url, "url", true)) {}

}  // namespace ddpdeid
