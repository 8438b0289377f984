#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "textdeid/lexicon.hpp"
#include "textdeid/patterns.hpp"

namespace ddpdeid {

struct PathRename {
  std::string from;  // '/'-separated, relative to the tree root
  std::string to;
  bool operator==(const PathRename&) const = default;
};

// One file or folder name with every key replaced by its code.
std::string rewrite_component(std::string_view name, const Lexicon& lexicon,
                              const PatternSet& patterns);
// Applies rewrite_component to each '/'-separated component.
std::string rewrite_rel_path(std::string_view rel, const Lexicon& lexicon,
                             const PatternSet& patterns);

// Renames needed under root, parents before children. Throws InvariantError
// when two paths would end up with the same name; nothing is touched then.
std::vector<PathRename> plan_path_renames(const std::filesystem::path& root,
                                          const Lexicon& lexicon, const PatternSet& patterns);

// Moves every entry to a temporary name deepest first, then to its final
// name shallowest first, so swaps and chains cannot clobber each other.
void apply_renames(const std::filesystem::path& root, const std::vector<PathRename>& plan);

}  // namespace ddpdeid
