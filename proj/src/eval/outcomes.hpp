#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/category.hpp"
#include "eval/ground_truth.hpp"
#include "eval/metrics.hpp"
#include "keymap/keymap.hpp"

namespace ddpdeid {

struct OutcomeKey {
  std::string ddp;
  std::string file;
  Category category = Category::Username;

  auto operator<=>(const OutcomeKey&) const = default;
  bool operator==(const OutcomeKey&) const = default;
};

using Outcomes = std::map<OutcomeKey, OutcomeCounts>;

// One line of the de-identification report: replacements performed per
// (ddp, file, category).
struct ReportRow {
  std::string ddp;
  std::string file;
  Category category = Category::Username;
  std::uint64_t count = 0;

  bool operator==(const ReportRow&) const = default;
};

std::vector<ReportRow> parse_deid_report(std::string_view csv);
std::vector<ReportRow> load_deid_report(const std::filesystem::path& path);
std::string format_deid_report(const std::vector<ReportRow>& rows);

// De-identified content of a raw (ddp, file), or nullopt when the output has
// no such file.
using ContentLookup =
    std::function<std::optional<std::string>(const std::string& ddp, const std::string& file)>;

struct CountOptions {
  // Participant username/name (lowercase) -> participant id. Occurrences that
  // should carry a participant id but do not are counted as misses.
  std::map<std::string, std::string> participant_ids;
};

// Ground truth and report rows must use the same (raw) ddp and file names.
Outcomes count_outcomes(const std::vector<GroundTruthLabel>& truth, const ContentLookup& deid,
                        const std::vector<ReportRow>& report, const CountOptions& options = {});

// Per-row table followed by per-file totals over all DDPs and a grand total
// per category. Totals add counts first, then derive the metrics.
std::string render_report(const Outcomes& outcomes);

std::map<Category, OutcomeCounts> totals_by_category(const Outcomes& outcomes);

}  // namespace ddpdeid
