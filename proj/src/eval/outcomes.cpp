#include "eval/outcomes.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>

#include "common/errors.hpp"
#include "common/text.hpp"
#include "textdeid/rewrite.hpp"

namespace ddpdeid {

std::vector<ReportRow> parse_deid_report(std::string_view csv) {
  std::vector<ReportRow> out;
  std::size_t line_no = 0;
  for (const std::string& raw : split(csv, '\n')) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (line_no == 1) {
      if (f.size() != 4 || f[0] != "ddp" || f[3] != "count") {
        throw InputError("report: expected header 'ddp,file,category,count'");
      }
      continue;
    }
    const std::string where = "report line " + std::to_string(line_no);
    if (f.size() != 4) throw InputError(where + ": expected 4 fields");
    const auto cat = parse_category(f[2]);
    if (!cat) throw InputError(where + ": unknown category '" + f[2] + "'");
    std::uint64_t count = 0;
    const auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), count);
    if (ec != std::errc() || ptr != f[3].data() + f[3].size()) throw InputError(where + ": bad count");
    out.push_back({f[0], f[1], *cat, count});
  }
  if (line_no == 0) throw InputError("report: empty file");
  return out;
}

std::vector<ReportRow> load_deid_report(const std::filesystem::path& path) {
  return parse_deid_report(read_file(path));
}

std::string format_deid_report(const std::vector<ReportRow>& rows) {
  std::string out = "ddp,file,category,count\n";
  for (const auto& r : rows) {
    out += csv_escape(r.ddp) + ',' + csv_escape(r.file) + ',' + std::string(to_string(r.category)) + ',' +
           std::to_string(r.count) + '\n';
  }
  return out;
}

Outcomes count_outcomes(const std::vector<GroundTruthLabel>& truth, const ContentLookup& deid,
                        const std::vector<ReportRow>& report, const CountOptions& options) {
  Outcomes out;
  struct FileState {
    std::optional<std::string> content;
    bool loaded = false;
  };
  std::map<std::pair<std::string, std::string>, FileState> files;
  const auto content_of = [&](const std::string& ddp, const std::string& file) -> const std::optional<std::string>& {
    FileState& st = files[{ddp, file}];
    if (!st.loaded) {
      st.content = deid(ddp, file);
      st.loaded = true;
      if (!st.content) spdlog::warn("ground truth names {}/{} but the output has no such file", ddp, file);
    }
    return st.content;
  };

  // Labels whose replacement should be a participant id, grouped per file.
  struct Expect {
    std::uint64_t want = 0;
    std::vector<std::pair<OutcomeKey, std::uint64_t>> tp_by_label;
  };
  std::map<std::tuple<std::string, std::string, std::string>, Expect> expected;

  for (const GroundTruthLabel& label : truth) {
    OutcomeKey key{label.ddp_id, label.file, label.category};
    OutcomeCounts& oc = out[key];
    const auto& content = content_of(label.ddp_id, label.file);
    if (!content) {
      oc.fn += label.count;
      continue;
    }
    const std::uint64_t residual =
        std::min<std::uint64_t>(label.count, count_occurrences(*content, label.value, residual_rule(label.category)));
    oc.fn += residual;
    oc.tp += label.count - residual;

    if (label.category == Category::Username || label.category == Category::DdpId ||
        label.category == Category::Name) {
      auto pid = options.participant_ids.find(ascii_lower(label.value));
      if (pid != options.participant_ids.end()) {
        Expect& e = expected[{label.ddp_id, label.file, pid->second}];
        e.want += label.count - residual;
        e.tp_by_label.emplace_back(key, label.count - residual);
      }
    }
  }

  for (auto& [where, e] : expected) {
    const auto& [ddp, file, pid] = where;
    const auto& content = content_of(ddp, file);
    const std::uint64_t have = content ? count_occurrences(*content, pid, MatchRule::WordExact) : 0;
    std::uint64_t deficit = e.want > have ? e.want - have : 0;
    for (auto& [key, tp] : e.tp_by_label) {
      const std::uint64_t moved = std::min(deficit, tp);
      out[key].tp -= moved;
      out[key].fn += moved;
      deficit -= moved;
    }
  }

  std::map<OutcomeKey, std::uint64_t> performed;
  for (const ReportRow& r : report) performed[{r.ddp, r.file, r.category}] += r.count;
  for (const auto& [key, n] : performed) {
    OutcomeCounts& oc = out[key];
    if (n > oc.tp) oc.fp += n - oc.tp;
  }
  return out;
}

std::map<Category, OutcomeCounts> totals_by_category(const Outcomes& outcomes) {
  std::map<Category, OutcomeCounts> t;
  for (const auto& [key, c] : outcomes) t[key.category] += c;
  return t;
}

namespace {

void add_row(std::string& out, std::string_view ddp, std::string_view file, Category cat, const OutcomeCounts& c) {
  const Metrics m = compute_metrics(c);
  out += csv_escape(ddp) + ',' + csv_escape(file) + ',' + std::string(to_string(cat)) + ',' +
         std::to_string(c.tp + c.fn) + ',' + std::to_string(c.tp) + ',' + std::to_string(c.fn) + ',' +
         std::to_string(c.fp) + ',' + format_metric(m.recall) + ',' + format_metric(m.precision) + ',' +
         format_metric(m.f1) + '\n';
}

}  // namespace

std::string render_report(const Outcomes& outcomes) {
  std::string out = "ddp,file,category,total,tp,fn,fp,recall,precision,f1\n";
  std::map<std::pair<std::string, Category>, OutcomeCounts> per_file;
  for (const auto& [key, c] : outcomes) {
    add_row(out, key.ddp, key.file, key.category, c);
    per_file[{key.file, key.category}] += c;
  }
  for (const auto& [key, c] : per_file) add_row(out, "all", key.first, key.second, c);
  for (const auto& [cat, c] : totals_by_category(outcomes)) add_row(out, "all", "total", cat, c);
  return out;
}

}  // namespace ddpdeid
