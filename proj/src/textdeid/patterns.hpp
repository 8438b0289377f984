#pragma once

#include <boost/regex.hpp>
#include <string>

namespace ddpdeid {

struct PatternSource {
  std::string email;
  std::string phone;
  std::string url;  // compiled case-insensitive

  static PatternSource defaults();
};

// Anonymization patterns replaced wherever they occur, whether or not the
// value was seen during extraction.
class PatternSet {
 public:
  PatternSet() : PatternSet(PatternSource::defaults()) {}
  // Throws InputError on a malformed expression.
  explicit PatternSet(PatternSource source);

  const boost::regex& email() const { return email_; }
  const boost::regex& phone() const { return phone_; }
  const boost::regex& url() const { return url_; }
  const PatternSource& source() const { return source_; }

 private:
  PatternSource source_;
  boost::regex email_;
  boost::regex phone_;
  boost::regex url_;
};

}  // namespace ddpdeid
