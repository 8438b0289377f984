#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "common/category.hpp"

namespace ddpdeid {

struct GroundTruthLabel {
  std::string ddp_id;
  std::string file;  // relative path inside the raw DDP
  Category category = Category::Username;
  std::string value;
  std::uint64_t count = 1;

  bool operator==(const GroundTruthLabel&) const = default;
};

// `ddp_id\tfile\tcategory\tvalue\tcount` per line; an optional header line
// starting with `ddp_id\t` is skipped. Tabs, newlines and backslashes inside
// values are backslash-escaped.
std::vector<GroundTruthLabel> parse_ground_truth(std::string_view text);
std::vector<GroundTruthLabel> load_ground_truth(const std::filesystem::path& path);
std::string format_ground_truth(const std::vector<GroundTruthLabel>& labels);
void save_ground_truth(const std::vector<GroundTruthLabel>& labels, const std::filesystem::path& path);

std::string escape_tsv(std::string_view s);
std::string unescape_tsv(std::string_view s);

}  // namespace ddpdeid
