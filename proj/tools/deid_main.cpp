// Command-line front end: `deid run`, `deid eval`, `deid gen`.
#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "ddpdeid/ddpdeid.h"

namespace {

int exit_code(ddpdeid_status s) {
  switch (s) {
    case DDPDEID_OK: return 0;
    case DDPDEID_E_INPUT:
    case DDPDEID_E_ARGUMENT: return 1;
    default: return 2;
  }
}

int report(ddpdeid_status s) {
  if (s != DDPDEID_OK) std::fprintf(stderr, "deid: %s\n", ddpdeid_last_error());
  return exit_code(s);
}

struct RunArgs {
  std::vector<std::string> inputs;
  std::string output, participants, names, salt, save_keys, detections;
  std::string discard_list, exempt_labels, sender_labels, video_fourcc;
  bool cap_sensitive = false, skip_media = false, store_salt = false;
  unsigned workers = 0;
};

struct EvalArgs {
  std::string raw, deid, keys, ground_truth, report, participants, rewrite_report;
};

struct GenArgs {
  std::uint64_t seed = 0;
  std::string out, spec;
};

int do_run(const RunArgs& a) {
  ddpdeid_run_options* o = ddpdeid_run_options_new();
  ddpdeid_status s = DDPDEID_OK;
  const auto str = [&](auto setter, const std::string& v) {
    if (s == DDPDEID_OK && !v.empty()) s = setter(o, v.c_str());
  };
  for (const auto& in : a.inputs) str(ddpdeid_run_options_add_input, in);
  str(ddpdeid_run_options_set_output, a.output);
  str(ddpdeid_run_options_set_participants, a.participants);
  str(ddpdeid_run_options_set_names, a.names);
  str(ddpdeid_run_options_set_salt, a.salt);
  str(ddpdeid_run_options_set_save_keys, a.save_keys);
  str(ddpdeid_run_options_set_detections, a.detections);
  str(ddpdeid_run_options_set_discard_list, a.discard_list);
  str(ddpdeid_run_options_set_exempt_labels, a.exempt_labels);
  str(ddpdeid_run_options_set_sender_labels, a.sender_labels);
  str(ddpdeid_run_options_set_video_fourcc, a.video_fourcc);
  if (s == DDPDEID_OK) s = ddpdeid_run_options_set_cap_sensitive(o, a.cap_sensitive);
  if (s == DDPDEID_OK) s = ddpdeid_run_options_set_skip_media(o, a.skip_media);
  if (s == DDPDEID_OK) s = ddpdeid_run_options_set_store_salt(o, a.store_salt);
  if (s == DDPDEID_OK) s = ddpdeid_run_options_set_workers(o, a.workers);
  ddpdeid_run_summary sum{};
  if (s == DDPDEID_OK) s = ddpdeid_run(o, &sum);
  ddpdeid_run_options_free(o);
  if (s != DDPDEID_OK) return report(s);
  std::printf("ddps %zu, text files %zu, media files %zu (placeholders %zu, omitted %zu), discarded %zu, keys %zu\n",
              sum.ddps, sum.text_files, sum.media_files, sum.placeholders, sum.media_omitted, sum.discarded,
              sum.keys);
  for (int c = 0; c < DDPDEID_CAT_COUNT; ++c) {
    std::printf("replaced %-8s %llu\n", ddpdeid_category_name(static_cast<ddpdeid_category>(c)),
                static_cast<unsigned long long>(sum.replacements[c]));
  }
  return 0;
}

int do_eval(const EvalArgs& a) {
  ddpdeid_eval_options* o = ddpdeid_eval_options_new();
  ddpdeid_status s = DDPDEID_OK;
  const auto str = [&](auto setter, const std::string& v) {
    if (s == DDPDEID_OK && !v.empty()) s = setter(o, v.c_str());
  };
  str(ddpdeid_eval_options_set_raw, a.raw);
  str(ddpdeid_eval_options_set_deid, a.deid);
  str(ddpdeid_eval_options_set_keys, a.keys);
  str(ddpdeid_eval_options_set_ground_truth, a.ground_truth);
  str(ddpdeid_eval_options_set_report, a.report);
  str(ddpdeid_eval_options_set_participants, a.participants);
  str(ddpdeid_eval_options_set_rewrite_report, a.rewrite_report);
  ddpdeid_counts totals[DDPDEID_CAT_COUNT] = {};
  if (s == DDPDEID_OK) s = ddpdeid_eval(o, totals);
  ddpdeid_eval_options_free(o);
  if (s != DDPDEID_OK) return report(s);
  std::printf("%-9s %8s %6s %6s %9s %9s %9s\n", "category", "tp", "fn", "fp", "recall", "precision", "f1");
  for (int c = 0; c < DDPDEID_CAT_COUNT; ++c) {
    const ddpdeid_counts& n = totals[c];
    if (n.tp + n.fn + n.fp == 0) continue;
    ddpdeid_metrics m{};
    ddpdeid_compute_metrics(n, &m);
    char* r = nullptr;
    char* p = nullptr;
    char* f = nullptr;
    ddpdeid_format_metric(m.recall, m.recall_defined, 4, &r);
    ddpdeid_format_metric(m.precision, m.precision_defined, 4, &p);
    ddpdeid_format_metric(m.f1, m.f1_defined, 4, &f);
    std::printf("%-9s %8llu %6llu %6llu %9s %9s %9s\n", ddpdeid_category_name(static_cast<ddpdeid_category>(c)),
                static_cast<unsigned long long>(n.tp), static_cast<unsigned long long>(n.fn),
                static_cast<unsigned long long>(n.fp), r, p, f);
    ddpdeid_free_string(r);
    ddpdeid_free_string(p);
    ddpdeid_free_string(f);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"De-identification of data download packages"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ddpdeid_version()));
  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")->capture_default_str();

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "De-identify one or more DDPs");
  run_cmd->add_option("-i,--input", run.inputs, "Zip archive or unpacked directory (repeatable)")->required();
  run_cmd->add_option("-o,--output", run.output, "Output directory (must not exist or be empty)")->required();
  run_cmd->add_option("--participants", run.participants, "CSV username,name,participant_id")->check(CLI::ExistingFile);
  run_cmd->add_option("--names", run.names, "Name list, one name per line")->check(CLI::ExistingFile);
  run_cmd->add_flag("--cap-sensitive", run.cap_sensitive, "Only replace names that start with a capital");
  run_cmd->add_option("--salt", run.salt, "Hex salt for reproducible codes");
  run_cmd->add_option("--save-keys", run.save_keys, "Write the key file here");
  run_cmd->add_flag("--store-salt", run.store_salt, "Include the salt in the key file");
  run_cmd->add_option("--detections", run.detections, "Detections file for media")->check(CLI::ExistingFile);
  run_cmd->add_flag("--skip-media", run.skip_media, "Leave media out of the output");
  run_cmd->add_option("--discard-list", run.discard_list, "File names to discard")->check(CLI::ExistingFile);
  run_cmd->add_option("--exempt-labels", run.exempt_labels, "Labels skipped by structural patterns")
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--sender-labels", run.sender_labels, "Labels holding a username")->check(CLI::ExistingFile);
  run_cmd->add_option("--video-fourcc", run.video_fourcc, "Codec tag for re-encoded videos (default mp4v)");
  run_cmd->add_option("--workers", run.workers, "Worker threads (0: automatic)");

  EvalArgs ev;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score a de-identified output against ground truth");
  eval_cmd->add_option("--raw", ev.raw, "Directory with the raw DDPs")->required();
  eval_cmd->add_option("--deid", ev.deid, "Output directory of `deid run`")->required();
  eval_cmd->add_option("--keys", ev.keys, "Key file saved by `deid run`")->required();
  eval_cmd->add_option("--ground-truth", ev.ground_truth, "Ground-truth labels")->required();
  eval_cmd->add_option("--report", ev.report, "CSV report to write")->required();
  eval_cmd->add_option("--participants", ev.participants, "Participant file used for the run");
  eval_cmd->add_option("--rewrite-report", ev.rewrite_report, "Replacement report (default <deid>/deid_report.csv)");

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a synthetic corpus with ground truth");
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->required();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--spec", gen.spec, "Corpus spec (JSON)")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (ddpdeid_set_log_level(log_level.c_str()) != DDPDEID_OK) return report(DDPDEID_E_ARGUMENT);

  if (*run_cmd) return do_run(run);
  if (*eval_cmd) return do_eval(ev);
  return report(ddpdeid_gen(gen.seed, gen.out.c_str(), gen.spec.empty() ? nullptr : gen.spec.c_str()));
}
