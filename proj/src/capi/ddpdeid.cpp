#include "ddpdeid/ddpdeid.h"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "common/category.hpp"
#include "common/errors.hpp"
#include "eval/corpus.hpp"
#include "eval/metrics.hpp"
#include "extract/lexical.hpp"
#include "keymap/keymap.hpp"
#include "pipeline/run.hpp"
#include "textdeid/lexicon.hpp"
#include "textdeid/patterns.hpp"
#include "textdeid/rewrite.hpp"

#ifndef DDPDEID_VERSION
#define DDPDEID_VERSION "0.0.0"
#endif

struct ddpdeid_run_options {
  ddpdeid::RunConfig config;
};

struct ddpdeid_eval_options {
  ddpdeid::EvalConfig config;
};

struct ddpdeid_keymap {
  ddpdeid::KeyMap map;
};

namespace {

using ddpdeid::Category;

static_assert(static_cast<int>(Category::Username) == DDPDEID_CAT_USERNAME);
static_assert(static_cast<int>(Category::Name) == DDPDEID_CAT_NAME);
static_assert(static_cast<int>(Category::Email) == DDPDEID_CAT_EMAIL);
static_assert(static_cast<int>(Category::Phone) == DDPDEID_CAT_PHONE);
static_assert(static_cast<int>(Category::Url) == DDPDEID_CAT_URL);
static_assert(static_cast<int>(Category::DdpId) == DDPDEID_CAT_DDP_ID);

thread_local std::string g_last_error;

// Diagnostics go to stderr so that stdout stays free for results.
const bool g_logger_ready = [] {
  spdlog::set_default_logger(spdlog::stderr_color_mt("ddpdeid"));
  return true;
}();

ddpdeid_status fail(ddpdeid_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename Fn>
ddpdeid_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return DDPDEID_OK;
  } catch (const ddpdeid::InputError& e) {
    return fail(DDPDEID_E_INPUT, e.what());
  } catch (const ddpdeid::InvariantError& e) {
    return fail(DDPDEID_E_INVARIANT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DDPDEID_E_INTERNAL, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(DDPDEID_E_INPUT, e.what());
  } catch (const std::exception& e) {
    return fail(DDPDEID_E_INTERNAL, e.what());
  } catch (...) {
    return fail(DDPDEID_E_INTERNAL, "unknown error");
  }
}

char* dup_string(std::string_view s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

template <typename Opts, typename Fn>
ddpdeid_status set_field(Opts* opts, const char* value, Fn&& assign) {
  if (!opts || !value) return fail(DDPDEID_E_ARGUMENT, "null argument");
  return guarded([&] { assign(opts->config, std::string(value)); });
}

template <typename Opts, typename Fn>
ddpdeid_status set_flag(Opts* opts, Fn&& assign) {
  if (!opts) return fail(DDPDEID_E_ARGUMENT, "null options");
  assign(opts->config);
  return DDPDEID_OK;
}

}  // namespace

extern "C" {

const char* ddpdeid_version(void) { return DDPDEID_VERSION; }

const char* ddpdeid_last_error(void) { return g_last_error.c_str(); }

const char* ddpdeid_category_name(ddpdeid_category category) {
  if (category < 0 || category >= DDPDEID_CAT_COUNT) return "";
  return ddpdeid::to_string(static_cast<Category>(category)).data();
}

ddpdeid_status ddpdeid_set_log_level(const char* level) {
  if (!level) return fail(DDPDEID_E_ARGUMENT, "null level");
  const auto lvl = spdlog::level::from_str(level);
  if (lvl == spdlog::level::off && std::string_view(level) != "off") {
    return fail(DDPDEID_E_ARGUMENT, std::string("unknown log level: ") + level);
  }
  spdlog::set_level(lvl);
  return DDPDEID_OK;
}

void ddpdeid_free_string(char* s) { std::free(s); }

int ddpdeid_is_username_like(const char* s) { return s && ddpdeid::is_username_like(s) ? 1 : 0; }

int ddpdeid_is_timestamp(const char* s) { return s && ddpdeid::is_timestamp(s) ? 1 : 0; }

ddpdeid_run_options* ddpdeid_run_options_new(void) { return new (std::nothrow) ddpdeid_run_options(); }

void ddpdeid_run_options_free(ddpdeid_run_options* opts) { delete opts; }

ddpdeid_status ddpdeid_run_options_add_input(ddpdeid_run_options* o, const char* v) {
  return set_field(o, v, [](auto& c, std::string s) { c.inputs.emplace_back(std::move(s)); });
}
ddpdeid_status ddpdeid_run_options_set_output(ddpdeid_run_options* o, const char* v) {
  return set_field(o, v, [](auto& c, std::string s) { c.output = std::move(s); });
}
ddpdeid_status ddpdeid_run_options_set_participants(ddpdeid_run_options* o, const char* v) {
  return set_field(o, v, [](auto& c, std::string s) { c.participants = std::move(s); });
}
ddpdeid_status ddpdeid_run_options_set_names(ddpdeid_run_options* o, const char* v) {
  return set_field(o, v, [](auto& c, std::string s) { c.names = std::move(s); });
}
ddpdeid_status ddpdeid_run_options_set_cap_sensitive(ddpdeid_run_options* o, int enabled) {
  return set_flag(o, [&](auto& c) { c.cap_sensitive = enabled != 0; });
}
ddpdeid_status ddpdeid_run_options_set_salt(ddpdeid_run_options* o, const char* v) {
  return set_field(o, v, [](auto& c, std::string s) {
    ddpdeid::Salt::from_hex(s);  // validate early
    c.salt_hex = std::move(s);
  });
}
ddpdeid_status ddpdeid_run_options_set_save_keys(ddpdeid_run_options* o, const char* v) {
  return set_field(o, v, [](auto& c, std::string s) { c.save_keys = std::move(s); });
}
ddpdeid_status ddpdeid_run_options_set_store_salt(ddpdeid_run_options* o, int enabled) {
  return set_flag(o, [&](auto& c) { c.store_salt = enabled != 0; });
}
ddpdeid_status ddpdeid_run_options_set_detections(ddpdeid_run_options* o, const char* v) {
  return set_field(o, v, [](auto& c, std::string s) { c.detections = std::move(s); });
}
ddpdeid_status ddpdeid_run_options_set_skip_media(ddpdeid_run_options* o, int enabled) {
  return set_flag(o, [&](auto& c) { c.skip_media = enabled != 0; });
}
ddpdeid_status ddpdeid_run_options_set_discard_list(ddpdeid_run_options* o, const char* v) {
  return set_field(o, v, [](auto& c, std::string s) { c.discard_list = std::move(s); });
}
ddpdeid_status ddpdeid_run_options_set_exempt_labels(ddpdeid_run_options* o, const char* v) {
  return set_field(o, v, [](auto& c, std::string s) { c.exempt_labels = std::move(s); });
}
ddpdeid_status ddpdeid_run_options_set_sender_labels(ddpdeid_run_options* o, const char* v) {
  return set_field(o, v, [](auto& c, std::string s) { c.sender_labels = std::move(s); });
}
ddpdeid_status ddpdeid_run_options_set_video_fourcc(ddpdeid_run_options* o, const char* v) {
  if (v && std::strlen(v) != 4) return fail(DDPDEID_E_ARGUMENT, "fourcc must have four characters");
  return set_field(o, v, [](auto& c, std::string s) { c.video_fourcc = std::move(s); });
}
ddpdeid_status ddpdeid_run_options_set_workers(ddpdeid_run_options* o, unsigned workers) {
  return set_flag(o, [&](auto& c) { c.workers = workers; });
}

ddpdeid_status ddpdeid_run(const ddpdeid_run_options* opts, ddpdeid_run_summary* summary) {
  if (!opts) return fail(DDPDEID_E_ARGUMENT, "null options");
  return guarded([&] {
    const ddpdeid::RunSummary s = ddpdeid::run_deid(opts->config);
    if (!summary) return;
    *summary = {};
    summary->ddps = s.ddps;
    summary->text_files = s.text_files;
    summary->media_files = s.media_files;
    summary->placeholders = s.placeholders;
    summary->media_omitted = s.media_omitted;
    summary->discarded = s.discarded;
    summary->keys = s.keys;
    for (const auto& [cat, n] : s.replacements) summary->replacements[static_cast<int>(cat)] = n;
  });
}

ddpdeid_eval_options* ddpdeid_eval_options_new(void) { return new (std::nothrow) ddpdeid_eval_options(); }

void ddpdeid_eval_options_free(ddpdeid_eval_options* opts) { delete opts; }

ddpdeid_status ddpdeid_eval_options_set_raw(ddpdeid_eval_options* o, const char* v) {
  return set_field(o, v, [](auto& c, std::string s) { c.raw = std::move(s); });
}
ddpdeid_status ddpdeid_eval_options_set_deid(ddpdeid_eval_options* o, const char* v) {
  return set_field(o, v, [](auto& c, std::string s) { c.deid = std::move(s); });
}
ddpdeid_status ddpdeid_eval_options_set_keys(ddpdeid_eval_options* o, const char* v) {
  return set_field(o, v, [](auto& c, std::string s) { c.keys = std::move(s); });
}
ddpdeid_status ddpdeid_eval_options_set_ground_truth(ddpdeid_eval_options* o, const char* v) {
  return set_field(o, v, [](auto& c, std::string s) { c.ground_truth = std::move(s); });
}
ddpdeid_status ddpdeid_eval_options_set_report(ddpdeid_eval_options* o, const char* v) {
  return set_field(o, v, [](auto& c, std::string s) { c.report = std::move(s); });
}
ddpdeid_status ddpdeid_eval_options_set_participants(ddpdeid_eval_options* o, const char* v) {
  return set_field(o, v, [](auto& c, std::string s) { c.participants = std::move(s); });
}
ddpdeid_status ddpdeid_eval_options_set_rewrite_report(ddpdeid_eval_options* o, const char* v) {
  return set_field(o, v, [](auto& c, std::string s) { c.deid_report = std::move(s); });
}

ddpdeid_status ddpdeid_eval(const ddpdeid_eval_options* opts, ddpdeid_counts* totals) {
  if (!opts) return fail(DDPDEID_E_ARGUMENT, "null options");
  const auto& c = opts->config;
  if (c.raw.empty() || c.deid.empty() || c.keys.empty() || c.ground_truth.empty() || c.report.empty()) {
    return fail(DDPDEID_E_ARGUMENT, "raw, deid, keys, ground truth and report paths are required");
  }
  return guarded([&] {
    const ddpdeid::Outcomes outcomes = ddpdeid::run_eval(c);
    if (!totals) return;
    for (int i = 0; i < DDPDEID_CAT_COUNT; ++i) totals[i] = {};
    for (const auto& [cat, n] : ddpdeid::totals_by_category(outcomes)) {
      totals[static_cast<int>(cat)] = {n.tp, n.fp, n.fn};
    }
  });
}

ddpdeid_status ddpdeid_gen(uint64_t seed, const char* out_dir, const char* spec_path) {
  if (!out_dir) return fail(DDPDEID_E_ARGUMENT, "null output directory");
  return guarded([&] {
    const ddpdeid::CorpusSpec spec = spec_path ? ddpdeid::CorpusSpec::load(spec_path) : ddpdeid::CorpusSpec{};
    ddpdeid::write_corpus(ddpdeid::generate_corpus(seed, spec), out_dir);
  });
}

ddpdeid_status ddpdeid_compute_metrics(ddpdeid_counts counts, ddpdeid_metrics* out) {
  if (!out) return fail(DDPDEID_E_ARGUMENT, "null output");
  const ddpdeid::Metrics m = ddpdeid::compute_metrics({counts.tp, counts.fp, counts.fn});
  *out = {m.recall.value_or(0),     m.precision.value_or(0),     m.f1.value_or(0),
          m.recall.has_value() ? 1 : 0, m.precision.has_value() ? 1 : 0, m.f1.has_value() ? 1 : 0};
  return DDPDEID_OK;
}

ddpdeid_status ddpdeid_format_metric(double value, int defined, int decimals, char** out) {
  if (!out) return fail(DDPDEID_E_ARGUMENT, "null output");
  if (decimals < 0 || decimals > 17) return fail(DDPDEID_E_ARGUMENT, "decimals out of range");
  return guarded([&] {
    *out = dup_string(ddpdeid::format_metric(defined ? std::optional<double>(value) : std::nullopt, decimals));
  });
}

ddpdeid_status ddpdeid_keymap_new(const char* salt_hex, ddpdeid_keymap** out) {
  if (!out) return fail(DDPDEID_E_ARGUMENT, "null output");
  *out = nullptr;
  return guarded([&] {
    *out = new ddpdeid_keymap{ddpdeid::KeyMap(salt_hex ? ddpdeid::Salt::from_hex(salt_hex) : ddpdeid::Salt::random())};
  });
}

ddpdeid_status ddpdeid_keymap_load(const char* path, ddpdeid_keymap** out) {
  if (!path || !out) return fail(DDPDEID_E_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new ddpdeid_keymap{ddpdeid::load_keys(path).map}; });
}

void ddpdeid_keymap_free(ddpdeid_keymap* km) { delete km; }

size_t ddpdeid_keymap_size(const ddpdeid_keymap* km) { return km ? km->map.entries().size() : 0; }

ddpdeid_status ddpdeid_keymap_assign(ddpdeid_keymap* km, const char* category, const char* value, char** code) {
  if (!km || !category || !value || !code) return fail(DDPDEID_E_ARGUMENT, "null argument");
  *code = nullptr;
  const auto cat = ddpdeid::parse_category(category);
  if (!cat) return fail(DDPDEID_E_ARGUMENT, std::string("unknown category: ") + category);
  if (*value == '\0') return fail(DDPDEID_E_ARGUMENT, "empty value");
  return guarded([&] {
    *code = dup_string(km->map.assign({value, *cat, "", ddpdeid::Rule::LabelValue, {}}));
  });
}

ddpdeid_status ddpdeid_keymap_save(const ddpdeid_keymap* km, const char* path, int store_salt, int cap_sensitive) {
  if (!km || !path) return fail(DDPDEID_E_ARGUMENT, "null argument");
  return guarded([&] { ddpdeid::save_keys(km->map, path, {store_salt != 0, cap_sensitive != 0}); });
}

ddpdeid_status ddpdeid_deidentify_text(const ddpdeid_keymap* km, const char* text, size_t len, int cap_sensitive,
                                       char** out, size_t* out_len) {
  if (!km || (!text && len > 0) || !out) return fail(DDPDEID_E_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const ddpdeid::Lexicon lexicon(km->map, cap_sensitive != 0);
    const ddpdeid::PatternSet patterns(ddpdeid::PatternSource::defaults());
    const ddpdeid::TextResult r = ddpdeid::deidentify_text(std::string_view(text ? text : "", len), lexicon, patterns);
    *out = dup_string(r.text);
    if (out_len) *out_len = r.text.size();
  });
}

}  // extern "C"
