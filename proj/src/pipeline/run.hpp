#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eval/outcomes.hpp"
#include "textdeid/patterns.hpp"
#include "textdeid/rewrite.hpp"

namespace ddpdeid {

struct RunConfig {
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path output;
  std::optional<std::filesystem::path> participants;
  std::optional<std::filesystem::path> names;
  bool cap_sensitive = false;
  std::optional<std::string> salt_hex;
  std::optional<std::filesystem::path> save_keys;
  bool store_salt = false;
  std::optional<std::filesystem::path> detections;
  bool skip_media = false;
  // Each list file replaces the built-in defaults.
  std::optional<std::filesystem::path> discard_list;
  std::optional<std::filesystem::path> exempt_labels;
  std::optional<std::filesystem::path> sender_labels;
  PatternSource patterns = PatternSource::defaults();
  std::string video_fourcc = "mp4v";
  unsigned workers = 0;  // 0: hardware concurrency
};

struct RunSummary {
  std::size_t ddps = 0;
  std::size_t text_files = 0;
  std::size_t media_files = 0;
  std::size_t placeholders = 0;
  std::size_t media_omitted = 0;
  std::size_t discarded = 0;
  std::size_t keys = 0;
  CategoryCounts replacements;
  std::vector<std::string> output_ddps;  // de-identified root folder names
};

// Output files written next to the de-identified DDP folders.
inline constexpr const char* kDeidReportName = "deid_report.csv";
inline constexpr const char* kDiscardLogName = "discard_log.csv";
inline constexpr const char* kMediaLogName = "media_log.csv";

// Unpack, extract, build the key map, rewrite text and paths, blur media and
// write the reports. The output directory must not exist or be empty; it is
// removed again when the run fails.
RunSummary run_deid(const RunConfig& config);

// The username embedded in a package name such as "jdoe_99_20201021".
std::optional<std::string> owner_from_ddp_id(const std::string& ddp_id);

struct EvalConfig {
  std::filesystem::path raw;  // directory holding the raw DDPs (zips or folders)
  std::filesystem::path deid;
  std::filesystem::path keys;
  std::filesystem::path ground_truth;
  std::filesystem::path report;
  std::optional<std::filesystem::path> participants;
  std::optional<std::filesystem::path> deid_report;  // default: <deid>/deid_report.csv
};

Outcomes run_eval(const EvalConfig& config);

}  // namespace ddpdeid
