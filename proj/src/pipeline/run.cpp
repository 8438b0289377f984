#include "pipeline/run.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <regex>
#include <set>

#include "common/errors.hpp"
#include "common/parallel.hpp"
#include "common/text.hpp"
#include "extract/freetext.hpp"
#include "extract/names.hpp"
#include "extract/profile.hpp"
#include "extract/structured.hpp"
#include "ingest/package.hpp"
#include "keymap/keymap.hpp"
#include "media/media_io.hpp"
#include "media/regions.hpp"
#include "textdeid/lexicon.hpp"
#include "textdeid/paths.hpp"

namespace fs = std::filesystem;

namespace ddpdeid {
namespace {

bool contains_path(const fs::path& outer, const fs::path& inner) {
  const fs::path o = fs::weakly_canonical(outer);
  const fs::path i = fs::weakly_canonical(inner);
  auto oit = o.begin();
  auto iit = i.begin();
  for (; oit != o.end(); ++oit, ++iit) {
    if (oit->empty()) continue;  // trailing separator
    if (iit == i.end() || *oit != *iit) return false;
  }
  return true;
}

fs::path make_workdir() {
  std::random_device rd;
  for (int attempt = 0; attempt < 16; ++attempt) {
    const fs::path p = fs::temp_directory_path() / fmt::format("ddpdeid-work-{:08x}{:08x}", rd(), rd());
    if (fs::create_directory(p)) return p;
  }
  throw InvariantError("could not create a working directory under " + fs::temp_directory_path().string());
}

struct WorkdirGuard {
  fs::path path;
  ~WorkdirGuard() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::set<std::string> lower_set(const std::vector<std::string>& items) {
  std::set<std::string> out;
  for (const auto& s : items) out.insert(ascii_lower(s));
  return out;
}

void check_output(const RunConfig& config) {
  if (config.inputs.empty()) throw InputError("no input given");
  if (config.output.empty()) throw InputError("no output directory given");
  for (const fs::path& in : config.inputs) {
    if (!fs::exists(in)) throw InputError("input does not exist: " + in.string());
    if (contains_path(in, config.output) || contains_path(config.output, in)) {
      throw InputError("output directory must be distinct from input " + in.string());
    }
    if (config.save_keys && fs::is_directory(in) && contains_path(in, *config.save_keys)) {
      throw InputError("key file must not be written inside input " + in.string());
    }
  }
  if (fs::exists(config.output)) {
    if (!fs::is_directory(config.output)) throw InputError("output is not a directory: " + config.output.string());
    if (!fs::is_empty(config.output)) throw InputError("output directory is not empty: " + config.output.string());
  }
}

struct TextJob {
  std::size_t pkg = 0;
  std::string rel_path;
};

std::vector<PiiMatch> extract_file(const std::string& content, const std::string& rel, const std::string& ddp_id,
                                   const ExtractionContext& ctx, const NameList& names) {
  std::vector<PiiMatch> out;
  const auto append = [&](std::vector<PiiMatch> more) {
    out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
  };
  const auto scan_text = [&](std::string_view text) {
    append(extract_freetext_usernames(text, rel, ctx));
    if (names.size() > 0) append(scan_names(text, rel, names));
  };
  const Json doc = Json::parse(content, nullptr, false);
  if (doc.is_discarded()) {
    spdlog::warn("{}: {} is not valid JSON; structural patterns skipped", ddp_id, rel);
    scan_text(content);
    return out;
  }
  if (is_profile_file(rel)) append(extract_profile(doc, rel, ctx));
  append(extract_structured(doc, rel, ctx));
  for_each_string(doc, [&](const std::string& s) { scan_text(s); });
  return out;
}

void write_rows(const fs::path& path, std::string header, const std::vector<std::vector<std::string>>& rows) {
  std::string out = std::move(header) + '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(',');
      out += csv_escape(row[i]);
    }
    out.push_back('\n');
  }
  write_file(path, out);
}

RunSummary run_inner(const RunConfig& config) {
  RunSummary summary;
  const PatternSet patterns(config.patterns);

  ExtractionContext ctx;
  if (config.sender_labels) ctx.labels.sender_labels = lower_set(load_list_file(*config.sender_labels));
  if (config.exempt_labels) ctx.labels.exempt_labels = lower_set(load_list_file(*config.exempt_labels));
  const std::vector<std::string> discard =
      config.discard_list ? load_list_file(*config.discard_list) : default_discard_list();

  NameList names;
  if (config.names) {
    names = NameList::load(*config.names, config.cap_sensitive);
  } else {
    spdlog::warn("no name list given; names are not extracted");
  }

  std::vector<ParticipantRow> participants;
  if (config.participants) participants = load_participants(*config.participants);

  RegionSet detections;
  const bool media_enabled = !config.skip_media && config.detections.has_value();
  if (media_enabled) {
    detections = load_detections(*config.detections);
  } else {
    spdlog::warn("{}; media files are omitted from the output",
                 config.skip_media ? "media skipped on request" : "no detections file given");
  }

  KeyMap map(config.salt_hex ? Salt::from_hex(*config.salt_hex) : Salt::random());
  map.add_participants(participants);
  for (const auto& id : map.participant_ids()) ctx.reserved_codes.insert(id);

  WorkdirGuard work{make_workdir()};
  std::vector<Package> packages;
  for (const DdpInput& in : group_inputs(config.inputs)) {
    packages.push_back(filter_entries(unpack_ddp(in, work.path), discard));
  }
  summary.ddps = packages.size();

  std::vector<TextJob> text_jobs;
  std::vector<TextJob> media_jobs;
  for (std::size_t p = 0; p < packages.size(); ++p) {
    summary.discarded += packages[p].discard_log.size();
    for (const PackageEntry& e : packages[p].entries) {
      if (e.kind == EntryKind::StructuredText) text_jobs.push_back({p, e.rel_path});
      if (e.kind == EntryKind::Image || e.kind == EntryKind::Video) media_jobs.push_back({p, e.rel_path});
    }
  }

  // Phase 1: extraction.
  std::vector<std::vector<PiiMatch>> found(text_jobs.size());
  parallel_for(
      text_jobs.size(),
      [&](std::size_t i) {
        const Package& pkg = packages[text_jobs[i].pkg];
        const std::string content = read_file(pkg.root / text_jobs[i].rel_path);
        found[i] = extract_file(content, text_jobs[i].rel_path, pkg.ddp_id, ctx, names);
      },
      config.workers);

  for (const Package& pkg : packages) {
    if (auto owner = owner_from_ddp_id(pkg.ddp_id); owner && ctx.accepts_username(*owner)) {
      map.assign({*owner, Category::DdpId, pkg.ddp_id, Rule::LabelValue, {}});
    }
  }
  // Profile aliases need their username in place first.
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& matches : found) {
      for (const PiiMatch& m : matches) {
        if ((m.rule == Rule::ProfileName) == (pass == 1)) map.assign(m);
      }
    }
  }
  summary.keys = map.entries().size();
  const Lexicon lexicon(map, config.cap_sensitive);

  // Phase 2: rewriting into the output tree under the original names.
  std::vector<ReportRow> report;
  std::mutex report_mutex;
  parallel_for(
      text_jobs.size(),
      [&](std::size_t i) {
        const Package& pkg = packages[text_jobs[i].pkg];
        const std::string& rel = text_jobs[i].rel_path;
        const TextResult r = deidentify_text(read_file(pkg.root / rel), lexicon, patterns);
        write_file(config.output / pkg.ddp_id / rel, r.text);
        const std::string ddp = rewrite_component(pkg.ddp_id, lexicon, patterns);
        const std::string file = rewrite_rel_path(rel, lexicon, patterns);
        std::lock_guard lock(report_mutex);
        for (const auto& [cat, n] : r.counts) {
          if (n > 0) report.push_back({ddp, file, cat, n});
        }
      },
      config.workers);
  summary.text_files = text_jobs.size();

  std::vector<std::vector<std::string>> media_rows(media_jobs.size());
  std::vector<char> placeholder(media_jobs.size(), 0);
  parallel_for(
      media_jobs.size(),
      [&](std::size_t i) {
        const Package& pkg = packages[media_jobs[i].pkg];
        const std::string& rel = media_jobs[i].rel_path;
        const std::string ddp = rewrite_component(pkg.ddp_id, lexicon, patterns);
        const std::string file = rewrite_rel_path(rel, lexicon, patterns);
        if (!media_enabled) {
          media_rows[i] = {ddp, file, "omitted", "0"};
          return;
        }
        const fs::path in = pkg.root / rel;
        const fs::path out = config.output / pkg.ddp_id / rel;
        fs::create_directories(out.parent_path());
        auto it = detections.find(pkg.ddp_id + "/" + rel);
        if (it == detections.end()) it = detections.find(rel);
        MediaOutcome outcome;
        if (it == detections.end()) {
          spdlog::warn("{}: {} is not listed in the detections file; writing a placeholder", pkg.ddp_id, rel);
          outcome = write_placeholder(out, "not listed in detections");
        } else if (classify(rel) == EntryKind::Image) {
          outcome = deidentify_image(in, out, it->second);
        } else {
          OpenCvTranscoder transcoder(config.video_fourcc);
          outcome = deidentify_video(in, out, it->second, transcoder);
        }
        placeholder[i] = outcome.placeholder;
        media_rows[i] = {ddp, file, outcome.placeholder ? "placeholder" : "blurred",
                         std::to_string(outcome.regions_applied)};
      },
      config.workers);
  for (std::size_t i = 0; i < media_jobs.size(); ++i) {
    if (!media_enabled) {
      ++summary.media_omitted;
    } else {
      ++summary.media_files;
      summary.placeholders += placeholder[i];
    }
  }

  // Every package root holds at least its directory even when empty.
  for (const Package& pkg : packages) fs::create_directories(config.output / pkg.ddp_id);
  apply_renames(config.output, plan_path_renames(config.output, lexicon, patterns));
  for (const Package& pkg : packages) {
    summary.output_ddps.push_back(rewrite_component(pkg.ddp_id, lexicon, patterns));
  }

  std::sort(report.begin(), report.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.ddp, a.file, a.category) < std::tie(b.ddp, b.file, b.category);
  });
  for (const ReportRow& r : report) summary.replacements[r.category] += r.count;
  write_file(config.output / kDeidReportName, format_deid_report(report));

  std::vector<std::vector<std::string>> discard_rows;
  for (const Package& pkg : packages) {
    const std::string ddp = rewrite_component(pkg.ddp_id, lexicon, patterns);
    for (const DiscardRecord& d : pkg.discard_log) {
      discard_rows.push_back({ddp, rewrite_rel_path(d.rel_path, lexicon, patterns), d.reason});
    }
  }
  write_rows(config.output / kDiscardLogName, "ddp,file,reason", discard_rows);
  write_rows(config.output / kMediaLogName, "ddp,file,status,regions", media_rows);

  if (config.save_keys) {
    save_keys(map, *config.save_keys, {config.store_salt, config.cap_sensitive});
  }
  return summary;
}

}  // namespace

std::optional<std::string> owner_from_ddp_id(const std::string& ddp_id) {
  static const std::regex re(R"((.+)_(\d{8}))");
  std::smatch m;
  if (!std::regex_match(ddp_id, m, re) || !is_username_like(m[1].str())) return std::nullopt;
  return m[1].str();
}

RunSummary run_deid(const RunConfig& config) {
  check_output(config);
  const bool created = !fs::exists(config.output);
  fs::create_directories(config.output);
  try {
    return run_inner(config);
  } catch (...) {
    std::error_code ec;
    if (created) {
      fs::remove_all(config.output, ec);
    } else {
      for (const auto& de : fs::directory_iterator(config.output, ec)) fs::remove_all(de.path(), ec);
    }
    throw;
  }
}

Outcomes run_eval(const EvalConfig& config) {
  if (!fs::exists(config.keys)) throw InputError("key file not found: " + config.keys.string());
  const LoadedKeys keys = load_keys(config.keys);
  const Lexicon lexicon(keys.map, keys.cap_sensitive);
  const PatternSet patterns(PatternSource::defaults());

  if (!fs::is_directory(config.raw)) throw InputError("raw directory not found: " + config.raw.string());
  std::vector<fs::path> raw_inputs;
  for (const auto& de : fs::directory_iterator(config.raw)) {
    if (de.is_directory() || ascii_lower(de.path().extension().string()) == ".zip") raw_inputs.push_back(de.path());
  }
  std::sort(raw_inputs.begin(), raw_inputs.end());

  using Name = std::pair<std::string, std::string>;
  std::map<Name, Name> to_deid;
  std::map<Name, Name> to_raw;
  for (const DdpInput& in : group_inputs(raw_inputs)) {
    const std::string ddp = rewrite_component(in.ddp_id, lexicon, patterns);
    for (const std::string& rel : list_ddp_files(in)) {
      const Name deid{ddp, rewrite_rel_path(rel, lexicon, patterns)};
      to_deid[{in.ddp_id, rel}] = deid;
      to_raw[deid] = {in.ddp_id, rel};
    }
  }

  const ContentLookup lookup = [&](const std::string& ddp, const std::string& file) -> std::optional<std::string> {
    auto it = to_deid.find({ddp, file});
    const Name deid = it != to_deid.end()
                          ? it->second
                          : Name{rewrite_component(ddp, lexicon, patterns), rewrite_rel_path(file, lexicon, patterns)};
    const fs::path p = config.deid / deid.first / deid.second;
    if (!fs::is_regular_file(p)) return std::nullopt;
    return read_file(p);
  };

  std::vector<ReportRow> report = load_deid_report(config.deid_report.value_or(config.deid / kDeidReportName));
  for (ReportRow& r : report) {
    if (auto it = to_raw.find({r.ddp, r.file}); it != to_raw.end()) {
      r.ddp = it->second.first;
      r.file = it->second.second;
    }
  }

  CountOptions options;
  if (config.participants) {
    for (const ParticipantRow& row : load_participants(*config.participants)) {
      options.participant_ids[ascii_lower(row.username)] = row.participant_id;
      if (!row.name.empty()) options.participant_ids[ascii_lower(row.name)] = row.participant_id;
    }
  }

  const Outcomes outcomes = count_outcomes(load_ground_truth(config.ground_truth), lookup, report, options);
  write_file(config.report, render_report(outcomes));
  return outcomes;
}

}  // namespace ddpdeid
