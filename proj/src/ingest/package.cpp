#include "ingest/package.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <map>
#include <regex>
#include <set>

#include "common/errors.hpp"
#include "common/text.hpp"
#include "ingest/zip.hpp"

namespace fs = std::filesystem;

namespace ddpdeid {
namespace {

std::string extension_lower(std::string_view rel_path) {
  const std::size_t slash = rel_path.rfind('/');
  const std::string_view base =
      slash == std::string_view::npos ? rel_path : rel_path.substr(slash + 1);
  const std::size_t dot = base.rfind('.');
  if (dot == std::string_view::npos || dot == 0) return {};
  return ascii_lower(base.substr(dot));
}

std::string base_name(std::string_view rel_path) {
  const std::size_t slash = rel_path.rfind('/');
  return std::string(slash == std::string_view::npos ? rel_path : rel_path.substr(slash + 1));
}

bool is_inside(const fs::path& root, const fs::path& candidate) {
  const fs::path r = fs::weakly_canonical(root);
  const fs::path c = fs::weakly_canonical(candidate);
  auto rit = r.begin();
  auto cit = c.begin();
  for (; rit != r.end(); ++rit, ++cit) {
    if (cit == c.end() || *rit != *cit) return false;
  }
  return cit != c.end();
}

struct RawFile {
  std::string rel_path;
  std::string data;
};

void add_entry(Package& pkg, std::set<std::string>& seen, const std::string& rel,
               std::string_view data) {
  if (!seen.insert(rel).second) {
    throw InputError("ambiguous package: entry '" + rel + "' appears more than once in " +
                     pkg.ddp_id);
  }
  const fs::path target = pkg.root / fs::path(rel);
  if (!is_inside(pkg.root, target)) {
    pkg.discard_log.push_back({rel, "path escapes package root"});
    spdlog::warn("{}: rejected entry '{}' (escapes package root)", pkg.ddp_id, rel);
    return;
  }
  write_file(target, data);
  const EntryKind kind = classify(rel);
  if (kind == EntryKind::Discard) {
    pkg.discard_log.push_back({rel, "unsupported file type"});
    spdlog::info("{}: discarding '{}' (unsupported file type)", pkg.ddp_id, rel);
  }
  pkg.entries.push_back({rel, kind});
}

void unpack_zip(Package& pkg, std::set<std::string>& seen, const fs::path& archive) {
  zip::Reader reader(archive);
  for (const zip::Entry& e : reader.entries()) {
    if (e.is_directory()) continue;
    const auto rel = sanitize_entry_path(e.name);
    if (!rel) {
      pkg.discard_log.push_back({e.name, "path escapes package root"});
      spdlog::warn("{}: rejected entry '{}' (escapes package root)", pkg.ddp_id, e.name);
      continue;
    }
    add_entry(pkg, seen, *rel, reader.read(e));
  }
}

void unpack_directory(Package& pkg, std::set<std::string>& seen, const fs::path& dir) {
  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(dir, fs::directory_options::none);
       it != fs::recursive_directory_iterator(); ++it) {
    const auto& de = *it;
    if (de.is_symlink()) {
      const std::string rel = de.path().lexically_relative(dir).generic_string();
      pkg.discard_log.push_back({rel, "symbolic link"});
      spdlog::warn("{}: skipping symbolic link '{}'", pkg.ddp_id, rel);
      if (de.is_directory()) it.disable_recursion_pending();
      continue;
    }
    if (de.is_regular_file()) files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files) {
    add_entry(pkg, seen, f.lexically_relative(dir).generic_string(), read_file(f));
  }
}

std::string stem_of(const fs::path& input) {
  fs::path p = input;
  if (p.filename().empty()) p = p.parent_path();  // trailing slash
  if (fs::is_directory(p)) return p.filename().string();
  std::string name = p.filename().string();
  if (ascii_lower(fs::path(name).extension().string()) == ".zip") {
    name = fs::path(name).stem().string();
  }
  return name;
}

}  // namespace

std::string_view to_string(EntryKind kind) {
  switch (kind) {
    case EntryKind::StructuredText: return "structured_text";
    case EntryKind::Image: return "image";
    case EntryKind::Video: return "video";
    case EntryKind::Discard: return "discard";
  }
  return "discard";
}

EntryKind classify(std::string_view rel_path) {
  const std::string ext = extension_lower(rel_path);
  if (ext == ".json") return EntryKind::StructuredText;
  if (ext == ".jpg" || ext == ".jpeg") return EntryKind::Image;
  if (ext == ".mp4") return EntryKind::Video;
  return EntryKind::Discard;
}

std::optional<std::string> sanitize_entry_path(std::string_view raw) {
  std::string name(raw);
  std::replace(name.begin(), name.end(), '\\', '/');
  if (name.empty() || name.front() == '/') return std::nullopt;
  if (name.size() >= 2 && name[1] == ':') return std::nullopt;  // drive letter
  std::vector<std::string> parts;
  for (const std::string& part : split(name, '/')) {
    if (part.empty() || part == ".") continue;
    if (part == "..") return std::nullopt;
    parts.push_back(part);
  }
  if (parts.empty()) return std::nullopt;
  std::string out;
  for (const std::string& p : parts) {
    if (!out.empty()) out.push_back('/');
    out += p;
  }
  return out;
}

std::vector<DdpInput> group_inputs(const std::vector<fs::path>& inputs) {
  static const std::regex part_re(R"((.+)_part_(\d+))", std::regex::icase);
  std::map<std::string, std::vector<std::pair<long, fs::path>>> groups;
  std::vector<std::string> order;
  for (const fs::path& in : inputs) {
    if (!fs::exists(in)) throw InputError("input does not exist: " + in.string());
    std::string id = stem_of(in);
    long part_no = 0;
    std::smatch m;
    if (std::regex_match(id, m, part_re)) {
      part_no = std::stol(m[2].str());
      id = m[1].str();
    }
    auto [it, inserted] = groups.try_emplace(id);
    if (inserted) order.push_back(id);
    it->second.emplace_back(part_no, in);
  }
  std::vector<DdpInput> out;
  for (const std::string& id : order) {
    auto parts = groups[id];
    std::sort(parts.begin(), parts.end());
    for (std::size_t i = 1; i < parts.size(); ++i) {
      if (parts[i].first == parts[i - 1].first) {
        throw InputError("duplicate input for DDP '" + id + "': " + parts[i].second.string());
      }
    }
    DdpInput d{id, {}};
    for (auto& [no, path] : parts) d.parts.push_back(path);
    out.push_back(std::move(d));
  }
  return out;
}

Package unpack_ddp(const DdpInput& input, const fs::path& workdir) {
  Package pkg;
  pkg.ddp_id = input.ddp_id;
  pkg.root = workdir / input.ddp_id;
  if (fs::exists(pkg.root)) throw InputError("working directory already holds " + input.ddp_id);
  fs::create_directories(pkg.root);
  std::set<std::string> seen;
  for (const fs::path& part : input.parts) {
    if (fs::is_directory(part)) {
      unpack_directory(pkg, seen, part);
    } else if (zip::looks_like_zip(part)) {
      unpack_zip(pkg, seen, part);
    } else {
      throw InputError("not a zip archive or directory: " + part.string());
    }
  }
  std::sort(pkg.entries.begin(), pkg.entries.end(),
            [](const PackageEntry& a, const PackageEntry& b) { return a.rel_path < b.rel_path; });
  return pkg;
}

Package unpack_ddp(const fs::path& archive, const fs::path& workdir) {
  return unpack_ddp(DdpInput{stem_of(archive), {archive}}, workdir);
}

Package filter_entries(Package pkg, const std::vector<std::string>& discard_list) {
  if (discard_list.empty()) return pkg;
  std::set<std::string> names;
  for (const std::string& n : discard_list) names.insert(ascii_lower(n));
  std::vector<PackageEntry> kept;
  for (PackageEntry& e : pkg.entries) {
    if (names.contains(ascii_lower(base_name(e.rel_path))) ||
        names.contains(ascii_lower(e.rel_path))) {
      std::error_code ec;
      fs::remove(pkg.path_of(e), ec);
      pkg.discard_log.push_back({e.rel_path, "on discard list"});
      spdlog::info("{}: removed '{}' (discard list)", pkg.ddp_id, e.rel_path);
      continue;
    }
    kept.push_back(std::move(e));
  }
  pkg.entries = std::move(kept);
  return pkg;
}

std::vector<std::string> default_discard_list() {
  return {"autofill.json", "account_history.json"};
}

std::vector<std::string> list_ddp_files(const DdpInput& input) {
  std::vector<std::string> out;
  for (const fs::path& part : input.parts) {
    if (fs::is_directory(part)) {
      for (const auto& de : fs::recursive_directory_iterator(part)) {
        if (de.is_regular_file() && !de.is_symlink()) {
          out.push_back(de.path().lexically_relative(part).generic_string());
        }
      }
    } else {
      zip::Reader reader(part);
      for (const zip::Entry& e : reader.entries()) {
        if (e.is_directory()) continue;
        if (auto rel = sanitize_entry_path(e.name)) out.push_back(*rel);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace ddpdeid
