#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ddpdeid {

enum class RegionKind { Face, Text };

struct Region {
  RegionKind kind = RegionKind::Face;
  std::optional<int> frame;  // none: still image, or every frame of a video
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  std::optional<int> landmarks_visible;  // 0..5, faces only

  bool operator==(const Region&) const = default;
};

// media rel_path -> regions
using RegionSet = std::map<std::string, std::vector<Region>>;

// Detections file: a JSON list of {"file", "regions": [{"kind", "frame", "x",
// "y", "w", "h", "landmarks_visible"?}]}. Throws InputError on anything that
// does not fit the contract.
RegionSet parse_detections(std::string_view text);
RegionSet load_detections(const std::filesystem::path& path);
std::string format_detections(const RegionSet& set);
void save_detections(const RegionSet& set, const std::filesystem::path& path);

}  // namespace ddpdeid
