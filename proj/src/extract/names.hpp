#pragma once

#include <array>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "extract/match.hpp"

namespace ddpdeid {

// First names matched as whole words. Stored lowercase; entries that double
// as everyday words ("van", "door", "can") are always pruned.
class NameList {
 public:
  static constexpr std::array<std::string_view, 3> kPruned = {"van", "door", "can"};

  NameList() = default;
  NameList(const std::vector<std::string>& names, bool cap_sensitive);
  static NameList load(const std::filesystem::path& path, bool cap_sensitive);

  bool contains(std::string_view word) const;
  bool cap_sensitive() const { return cap_sensitive_; }
  std::size_t size() const { return names_.size(); }
  const std::set<std::string>& names() const { return names_; }

 private:
  std::set<std::string> names_;
  std::vector<std::string> compound_;  // names containing non-word bytes
  bool cap_sensitive_ = false;

  friend std::vector<PiiMatch> scan_names(std::string_view, std::string_view, const NameList&);
};

std::vector<PiiMatch> scan_names(std::string_view text, std::string_view source,
                                 const NameList& names);

}  // namespace ddpdeid
