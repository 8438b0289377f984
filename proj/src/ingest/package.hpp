#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ddpdeid {

enum class EntryKind { StructuredText, Image, Video, Discard };

std::string_view to_string(EntryKind kind);

struct PackageEntry {
  std::string rel_path;  // '/'-separated, relative to Package::root
  EntryKind kind = EntryKind::Discard;

  bool operator==(const PackageEntry&) const = default;
};

struct DiscardRecord {
  std::string rel_path;
  std::string reason;
};

struct Package {
  std::filesystem::path root;
  std::string ddp_id;
  std::vector<PackageEntry> entries;  // sorted by rel_path, unique
  std::vector<DiscardRecord> discard_log;

  std::filesystem::path path_of(const PackageEntry& e) const { return root / e.rel_path; }
};

// One DDP to process; several parts when the platform split the export.
struct DdpInput {
  std::string ddp_id;
  std::vector<std::filesystem::path> parts;
};

// Classification by extension only (case-insensitive).
EntryKind classify(std::string_view rel_path);

// Normalizes an archive entry name to a safe relative path; nullopt when the
// name is absolute or climbs out of the root.
std::optional<std::string> sanitize_entry_path(std::string_view raw);

// Inputs whose stem ends in `_part_<n>` are grouped under the shared prefix;
// every other input is its own DDP. Duplicate ddp ids are an input error.
std::vector<DdpInput> group_inputs(const std::vector<std::filesystem::path>& inputs);

// Extracts (or copies, for directories) every part into workdir/<ddp_id>.
// The inputs are never written to.
Package unpack_ddp(const DdpInput& input, const std::filesystem::path& workdir);
Package unpack_ddp(const std::filesystem::path& archive, const std::filesystem::path& workdir);

// Drops entries whose file name (or full relative path) is on the list,
// deleting them from the working tree as well.
Package filter_entries(Package pkg, const std::vector<std::string>& discard_list);

std::vector<std::string> default_discard_list();

// Relative paths of all regular entries of a DDP without extracting them.
std::vector<std::string> list_ddp_files(const DdpInput& input);

}  // namespace ddpdeid
