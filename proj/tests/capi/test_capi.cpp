#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <ddpdeid/ddpdeid.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path path = fs::temp_directory_path() / ("ddpdeid-capi-" + std::to_string(std::random_device{}()));
  Scratch() { fs::create_directories(path); }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  ddpdeid_free_string(s);
  return out;
}

std::string format(double v, int defined = 1, int decimals = 4) {
  char* s = nullptr;
  REQUIRE(ddpdeid_format_metric(v, defined, decimals, &s) == DDPDEID_OK);
  return take(s);
}

const char* kSalt = "00112233445566778899aabbccddeeff00112233445566778899aabbccddeeff";

}  // namespace

TEST_CASE("version and category names") {
  CHECK(std::string(ddpdeid_version()).size() > 0);
  CHECK(std::string(ddpdeid_category_name(DDPDEID_CAT_USERNAME)) == "username");
  CHECK(std::string(ddpdeid_category_name(DDPDEID_CAT_DDP_ID)) == "ddp_id");
  CHECK(std::string(ddpdeid_category_name(static_cast<ddpdeid_category>(99))).empty());
}

TEST_CASE("argument errors set the last error") {
  CHECK(ddpdeid_compute_metrics({1, 0, 0}, nullptr) == DDPDEID_E_ARGUMENT);
  CHECK(std::string(ddpdeid_last_error()).size() > 0);
  CHECK(ddpdeid_run_options_add_input(nullptr, "x") == DDPDEID_E_ARGUMENT);
  CHECK(ddpdeid_set_log_level("loud") == DDPDEID_E_ARGUMENT);
  CHECK(ddpdeid_set_log_level("off") == DDPDEID_OK);
  ddpdeid_keymap* km = nullptr;
  CHECK(ddpdeid_keymap_new("zz", &km) == DDPDEID_E_INPUT);
  CHECK(km == nullptr);
  CHECK(ddpdeid_keymap_load("/nonexistent/keys.tsv", &km) == DDPDEID_E_INPUT);
}

TEST_CASE("predicates") {
  CHECK(ddpdeid_is_username_like("jdoe_99") == 1);
  CHECK(ddpdeid_is_username_like("a b") == 0);
  CHECK(ddpdeid_is_timestamp("2020-10-21T12:30:00+00:00") == 1);
  CHECK(ddpdeid_is_timestamp("jdoe_99") == 0);
}

TEST_CASE("metrics") {
  ddpdeid_metrics m{};
  REQUIRE(ddpdeid_compute_metrics({176, 24, 1}, &m) == DDPDEID_OK);
  CHECK(m.recall_defined == 1);
  CHECK(m.recall == doctest::Approx(176.0 / 177.0));
  CHECK(m.precision == doctest::Approx(0.88));
  CHECK(format(m.f1) == "0.9337");
  REQUIRE(ddpdeid_compute_metrics({0, 0, 0}, &m) == DDPDEID_OK);
  CHECK(m.recall_defined == 0);
  CHECK(m.f1_defined == 0);
  CHECK(format(0.0, 0) == "-");
  CHECK(format(0.5, 1, 2) == "0.50");
}

TEST_CASE("key map assign, text rewrite and save") {
  ddpdeid_keymap* km = nullptr;
  REQUIRE(ddpdeid_keymap_new(kSalt, &km) == DDPDEID_OK);
  char* a = nullptr;
  char* b = nullptr;
  REQUIRE(ddpdeid_keymap_assign(km, "username", "JDoe_99", &a) == DDPDEID_OK);
  REQUIRE(ddpdeid_keymap_assign(km, "username", "jdoe_99", &b) == DDPDEID_OK);
  const std::string code = take(a);
  CHECK(code == take(b));
  CHECK(code.size() == 18);
  CHECK(ddpdeid_keymap_size(km) == 1);
  CHECK(ddpdeid_keymap_assign(km, "colour", "x", &a) == DDPDEID_E_ARGUMENT);

  const std::string text = R"({"text":"hoi @JDOE_99, mail jane@example.nl"})";
  char* out = nullptr;
  size_t len = 0;
  REQUIRE(ddpdeid_deidentify_text(km, text.data(), text.size(), 0, &out, &len) == DDPDEID_OK);
  const std::string rewritten(out, len);
  ddpdeid_free_string(out);
  CHECK(rewritten.find(code) != std::string::npos);
  CHECK(rewritten.find("jane@example.nl") == std::string::npos);

  Scratch s;
  const std::string keys = (s.path / "keys.tsv").string();
  REQUIRE(ddpdeid_keymap_save(km, keys.c_str(), 0, 1) == DDPDEID_OK);
  ddpdeid_keymap* back = nullptr;
  REQUIRE(ddpdeid_keymap_load(keys.c_str(), &back) == DDPDEID_OK);
  CHECK(ddpdeid_keymap_size(back) == 1);
  ddpdeid_keymap_free(back);
  ddpdeid_keymap_free(km);
}

TEST_CASE("generate, run and evaluate") {
  Scratch s;
  const std::string corpus = (s.path / "corpus").string();
  {
    std::ofstream(s.path / "spec.json") << R"({"ddps": 2, "videos": 0})";
  }
  REQUIRE(ddpdeid_gen(3, corpus.c_str(), (s.path / "spec.json").string().c_str()) == DDPDEID_OK);

  ddpdeid_run_options* ro = ddpdeid_run_options_new();
  for (const auto& de : fs::directory_iterator(s.path / "corpus/raw")) {
    REQUIRE(ddpdeid_run_options_add_input(ro, de.path().string().c_str()) == DDPDEID_OK);
  }
  const std::string out = (s.path / "out").string();
  const std::string keys = (s.path / "keys.tsv").string();
  ddpdeid_run_options_set_output(ro, out.c_str());
  ddpdeid_run_options_set_participants(ro, (corpus + "/participants.csv").c_str());
  ddpdeid_run_options_set_names(ro, (corpus + "/names.txt").c_str());
  ddpdeid_run_options_set_cap_sensitive(ro, 1);
  ddpdeid_run_options_set_salt(ro, kSalt);
  ddpdeid_run_options_set_save_keys(ro, keys.c_str());
  ddpdeid_run_options_set_detections(ro, (corpus + "/detections.json").c_str());
  ddpdeid_run_summary sum{};
  REQUIRE(ddpdeid_run(ro, &sum) == DDPDEID_OK);
  CHECK(sum.ddps == 2);
  CHECK(sum.replacements[DDPDEID_CAT_USERNAME] > 0);
  CHECK(sum.placeholders == 0);

  // A second run into the now non-empty output is an input error.
  CHECK(ddpdeid_run(ro, &sum) == DDPDEID_E_INPUT);
  ddpdeid_run_options_free(ro);

  ddpdeid_eval_options* eo = ddpdeid_eval_options_new();
  ddpdeid_eval_options_set_raw(eo, (corpus + "/raw").c_str());
  ddpdeid_eval_options_set_deid(eo, out.c_str());
  ddpdeid_eval_options_set_keys(eo, keys.c_str());
  ddpdeid_eval_options_set_ground_truth(eo, (corpus + "/ground_truth.tsv").c_str());
  ddpdeid_eval_options_set_report(eo, (s.path / "eval.csv").string().c_str());
  ddpdeid_eval_options_set_participants(eo, (corpus + "/participants.csv").c_str());
  ddpdeid_counts totals[DDPDEID_CAT_COUNT] = {};
  REQUIRE(ddpdeid_eval(eo, totals) == DDPDEID_OK);
  ddpdeid_eval_options_free(eo);
  for (int c = 0; c < DDPDEID_CAT_COUNT; ++c) {
    CAPTURE(ddpdeid_category_name(static_cast<ddpdeid_category>(c)));
    CHECK(totals[c].tp > 0);
    CHECK(totals[c].fn == 0);
    CHECK(totals[c].fp == 0);
  }
}
