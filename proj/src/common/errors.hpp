#pragma once

#include <stdexcept>
#include <string>

namespace ddpdeid {

// Bad or unreadable user input: archives, config files, key files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A data invariant the toolkit relies on was violated (e.g. code collision).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ddpdeid
