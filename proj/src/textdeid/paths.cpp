#include "textdeid/paths.hpp"

#include <algorithm>
#include <map>

#include "common/errors.hpp"
#include "textdeid/rewrite.hpp"

namespace ddpdeid {
namespace fs = std::filesystem;
namespace {

std::size_t depth(std::string_view rel) {
  return static_cast<std::size_t>(std::count(rel.begin(), rel.end(), '/'));
}

std::string parent_of(std::string_view rel) {
  const std::size_t slash = rel.rfind('/');
  return slash == std::string_view::npos ? std::string() : std::string(rel.substr(0, slash));
}

std::string_view base_of(std::string_view rel) {
  const std::size_t slash = rel.rfind('/');
  return slash == std::string_view::npos ? rel : rel.substr(slash + 1);
}

fs::path under(const fs::path& root, std::string_view parent, std::string_view name) {
  return parent.empty() ? root / name : root / parent / name;
}

}  // namespace

std::string rewrite_component(std::string_view name, const Lexicon& lexicon,
                              const PatternSet& patterns) {
  return apply_replacements(name,
                            find_replacements(name, lexicon, patterns, Boundary::PathComponent));
}

std::string rewrite_rel_path(std::string_view rel, const Lexicon& lexicon,
                             const PatternSet& patterns) {
  std::string out;
  std::size_t start = 0;
  while (true) {
    const std::size_t slash = rel.find('/', start);
    const std::string_view part =
        rel.substr(start, slash == std::string_view::npos ? std::string_view::npos : slash - start);
    out += rewrite_component(part, lexicon, patterns);
    if (slash == std::string_view::npos) break;
    out += '/';
    start = slash + 1;
  }
  return out;
}

std::vector<PathRename> plan_path_renames(const fs::path& root, const Lexicon& lexicon,
                                          const PatternSet& patterns) {
  std::vector<std::string> all;
  for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator();
       ++it) {
    all.push_back(it->path().lexically_relative(root).generic_string());
  }
  std::sort(all.begin(), all.end());

  std::map<std::string, std::string> target_of;
  std::vector<PathRename> plan;
  for (const std::string& rel : all) {
    std::string to = rewrite_rel_path(rel, lexicon, patterns);
    auto [it, fresh] = target_of.emplace(to, rel);
    if (!fresh) {
      throw InvariantError("rename collision: two entries would both be named '" + to + "'");
    }
    // Entries below a renamed folder move with it.
    if (base_of(to) != base_of(rel)) plan.push_back({rel, std::move(to)});
  }
  std::stable_sort(plan.begin(), plan.end(), [](const PathRename& a, const PathRename& b) {
    return depth(a.from) < depth(b.from);
  });
  return plan;
}

void apply_renames(const fs::path& root, const std::vector<PathRename>& plan) {
  std::vector<std::size_t> order(plan.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return depth(plan[a].from) > depth(plan[b].from);
  });
  const auto temp_name = [](std::size_t i) { return ".ddpdeid-rename-" + std::to_string(i); };

  // Deepest first: parents still carry their original names.
  for (std::size_t i : order) {
    const std::string parent = parent_of(plan[i].from);
    fs::rename(root / plan[i].from, under(root, parent, temp_name(i)));
  }
  // Shallowest first: parents already carry their final names.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::string parent = parent_of(plan[*it].to);
    fs::rename(under(root, parent, temp_name(*it)), root / plan[*it].to);
  }
}

}  // namespace ddpdeid
