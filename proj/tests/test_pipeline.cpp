#include <doctest.h>

#include <map>

#include "common/errors.hpp"
#include "common/text.hpp"
#include "eval/corpus.hpp"
#include "ingest/zip.hpp"
#include "keymap/keymap.hpp"
#include "media/media_io.hpp"
#include "media/regions.hpp"
#include "pipeline/run.hpp"
#include "media_oracle.hpp"
#include "support.hpp"

using namespace ddpdeid;
namespace fs = std::filesystem;
using testing::get;
using testing::put;
using testing::TempDir;

namespace {

using Files = std::map<std::string, std::string>;

const std::string kSalt = "00112233445566778899aabbccddeeff00112233445566778899aabbccddeeff";

fs::path make_zip(const fs::path& dir, const std::string& ddp_id, const Files& files) {
  const fs::path p = dir / (ddp_id + ".zip");
  fs::create_directories(dir);
  zip::Writer w(p);
  for (const auto& [rel, data] : files) w.add(rel, data);
  w.close();
  return p;
}

// Every regular file below root, keyed by its '/'-separated relative path.
Files tree(const fs::path& root) {
  Files out;
  for (const auto& de : fs::recursive_directory_iterator(root)) {
    if (de.is_regular_file()) out[de.path().lexically_relative(root).generic_string()] = get(de.path());
  }
  return out;
}

bool contains_ci(const Files& files, std::string_view needle) {
  const std::string n = ascii_lower(needle);
  for (const auto& [rel, data] : files) {
    if (ascii_lower(rel).find(n) != std::string::npos || ascii_lower(data).find(n) != std::string::npos) return true;
  }
  return false;
}

const Files kSmall = {
    {"profile.json", R"({"username":"jdoe_99","name":"Jane Doe","email":"jane@example.nl","phone_number":"+31612345678"})"},
    {"messages/inbox/mary.k_1/message_1.json",
     R"({"participants":["jdoe_99","mary.k"],"messages":[{"sender":"mary.k","text":"Hoi Jane, zie @JDoe_99 en mail jane@example.nl"}]})"},
    {"likes.json", R"([["2020-10-21T12:30:00+00:00","mary.k"]])"},
    {"autofill.json", R"({"city":"Utrecht"})"},
    {"readme.txt", "hello jdoe_99"},
};

RunConfig small_config(const TempDir& t, const fs::path& zip) {
  RunConfig c;
  c.inputs = {zip};
  c.output = t / "out";
  c.salt_hex = kSalt;
  c.workers = 2;
  put(t / "names.txt", "Jane\nMary\n");
  c.names = t / "names.txt";
  return c;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("owner from package name") {
    CHECK(owner_from_ddp_id("jdoe_99_20201021") == "jdoe_99");
    CHECK(owner_from_ddp_id("a.b_c_20201021") == "a.b_c");
    CHECK_FALSE(owner_from_ddp_id("jdoe_99"));
    CHECK_FALSE(owner_from_ddp_id("jdoe_99_2020"));
    CHECK_FALSE(owner_from_ddp_id("_20201021"));
  }

  TEST_CASE("small package end to end") {
    TempDir t;
    const fs::path zip = make_zip(t / "in", "jdoe_99_20201021", kSmall);
    RunConfig c = small_config(t, zip);
    c.save_keys = t / "keys.tsv";
    const RunSummary s = run_deid(c);
    CHECK(s.ddps == 1);
    CHECK(s.text_files == 3);
    CHECK(s.discarded == 2);
    REQUIRE(s.output_ddps.size() == 1);
    CHECK(s.output_ddps[0].starts_with("__"));
    CHECK(s.output_ddps[0].ends_with("_20201021"));

    const Files out = tree(c.output / s.output_ddps[0]);
    CHECK(out.size() == 3);
    for (const char* gone : {"jdoe_99", "mary.k", "Jane", "jane@example.nl", "+31612345678"}) {
      CHECK_MESSAGE(!contains_ci(out, gone), gone);
    }
    CHECK(out.count("profile.json") == 1);
    CHECK(out.count("likes.json") == 1);
    CHECK_FALSE(fs::exists(c.output / "jdoe_99_20201021"));
    // The message folder carried a username and is renamed.
    for (const auto& [rel, _] : out) CHECK(rel.find("mary") == std::string::npos);

    const auto report = load_deid_report(c.output / kDeidReportName);
    for (const ReportRow& r : report) CHECK(r.ddp == s.output_ddps[0]);
    const std::string discards = get(c.output / kDiscardLogName);
    CHECK(discards.starts_with("ddp,file,reason\n"));
    CHECK(discards.find("autofill.json,on discard list") != std::string::npos);
    CHECK(discards.find("readme.txt,unsupported file type") != std::string::npos);
    CHECK(discards.find("jdoe_99") == std::string::npos);

    const LoadedKeys keys = load_keys(t / "keys.tsv");
    CHECK(keys.map.entries().size() == s.keys);
    CHECK(keys.map.find(KeyClass::User, "jdoe_99") != nullptr);
  }

  TEST_CASE("mixed-case spellings of one username share one key") {
    TempDir t;
    const fs::path zip = make_zip(t / "in", "owner_1_20201021",
                                  {{"likes.json", R"([["2020-10-21T12:30:00+00:00","JDoe_99"]])"},
                                   {"comments.json", R"([["2020-10-21T12:30:00+00:00","hoi","jdoe_99"]])"}});
    RunConfig c = small_config(t, zip);
    c.save_keys = t / "keys.tsv";
    const RunSummary s = run_deid(c);
    const LoadedKeys keys = load_keys(t / "keys.tsv");
    const KeyEntry* e = keys.map.find(KeyClass::User, "jdoe_99");
    REQUIRE(e != nullptr);
    std::size_t user_keys = 0;
    for (const auto& [k, _] : keys.map.entries()) user_keys += ascii_lower(k.value) == "jdoe_99";
    CHECK(user_keys == 1);
    const Files out = tree(c.output / s.output_ddps[0]);
    CHECK(out.at("likes.json").find(e->code) != std::string::npos);
    CHECK(out.at("comments.json").find(e->code) != std::string::npos);
  }

  TEST_CASE("participants get their id") {
    TempDir t;
    const fs::path zip = make_zip(t / "in", "jdoe_99_20201021", kSmall);
    RunConfig c = small_config(t, zip);
    put(t / "participants.csv", "username,name,participant_id\njdoe_99,,PP07\n");
    c.participants = t / "participants.csv";
    const RunSummary s = run_deid(c);
    CHECK(s.output_ddps[0] == "PP07_20201021");
    const Files out = tree(c.output / "PP07_20201021");
    CHECK(out.at("profile.json").find("\"PP07\"") != std::string::npos);
  }

  TEST_CASE("same salt, same output") {
    TempDir t;
    const fs::path zip = make_zip(t / "in", "jdoe_99_20201021", kSmall);
    RunConfig a = small_config(t, zip);
    RunConfig b = small_config(t, zip);
    b.output = t / "out2";
    b.workers = 7;
    run_deid(a);
    run_deid(b);
    CHECK(tree(a.output) == tree(b.output));
  }

  TEST_CASE("inputs are left untouched") {
    TempDir t;
    const fs::path zip = make_zip(t / "in", "jdoe_99_20201021", kSmall);
    for (const auto& [rel, data] : kSmall) put(t / "dir/jdoe_99_20201021" / rel, data);
    const Files before_dir = tree(t / "dir");
    const std::string before_zip = get(zip);
    RunConfig c = small_config(t, zip);
    c.inputs = {t / "dir/jdoe_99_20201021"};
    run_deid(c);
    c.output = t / "out2";
    c.inputs = {zip};
    run_deid(c);
    CHECK(tree(t / "dir") == before_dir);
    CHECK(get(zip) == before_zip);
  }

  TEST_CASE("a second pass changes nothing") {
    TempDir t;
    const fs::path zip = make_zip(t / "in", "jdoe_99_20201021", kSmall);
    RunConfig c = small_config(t, zip);
    c.save_keys = t / "keys.tsv";
    const RunSummary first = run_deid(c);
    RunConfig again = small_config(t, zip);
    again.inputs = {c.output / first.output_ddps[0]};
    again.output = t / "out2";
    const RunSummary second = run_deid(again);
    CHECK(second.output_ddps == first.output_ddps);
    CHECK(tree(again.output / second.output_ddps[0]) == tree(c.output / first.output_ddps[0]));
    for (const auto& [cat, n] : second.replacements) CHECK(n == 0);
  }

  TEST_CASE("cap sensitivity decides lowercase names") {
    const Files files = {{"comments.json", R"([["2020-10-21T12:30:00+00:00","Jane zei: jane komt ook","mary.k"]])"}};
    for (const bool cap : {true, false}) {
      CAPTURE(cap);
      TempDir t;
      RunConfig c = small_config(t, make_zip(t / "in", "owner_1_20201021", files));
      c.cap_sensitive = cap;
      const RunSummary s = run_deid(c);
      const std::string out = get(c.output / s.output_ddps[0] / "comments.json");
      CHECK(out.find("Jane") == std::string::npos);
      CHECK((out.find(" jane ") != std::string::npos) == cap);
    }
  }

  TEST_CASE("malformed JSON is still scanned as text") {
    TempDir t;
    RunConfig c = small_config(
        t, make_zip(t / "in", "owner_1_20201021",
                    {{"likes.json", R"([["2020-10-21T12:30:00+00:00","mary.k"]])"},
                     {"broken.json", R"({"text": "Hoi @mary.k, bel Jane op +31612345678" )"}}));
    const RunSummary s = run_deid(c);
    const std::string out = get(c.output / s.output_ddps[0] / "broken.json");
    CHECK(out.find("mary.k") == std::string::npos);
    CHECK(out.find("Jane") == std::string::npos);
    CHECK(out.find("+31612345678") == std::string::npos);
  }

  TEST_CASE("output must be fresh and separate from the inputs") {
    TempDir t;
    const fs::path zip = make_zip(t / "in", "jdoe_99_20201021", kSmall);
    for (const auto& [rel, data] : kSmall) put(t / "dir/jdoe_99_20201021" / rel, data);
    RunConfig c = small_config(t, zip);
    put(c.output / "stale.txt", "x");
    CHECK_THROWS_AS(run_deid(c), InputError);
    CHECK(get(c.output / "stale.txt") == "x");

    c.inputs = {t / "dir/jdoe_99_20201021"};
    c.output = t / "dir/jdoe_99_20201021/out";
    CHECK_THROWS_AS(run_deid(c), InputError);
    CHECK_FALSE(fs::exists(c.output));
    c.output = t / "dir";
    CHECK_THROWS_AS(run_deid(c), InputError);
  }

  TEST_CASE("a failing run leaves no output behind") {
    TempDir t;
    const fs::path good = make_zip(t / "in", "jdoe_99_20201021", kSmall);
    put(t / "in/bad_20201021.zip", "not a zip");
    RunConfig c = small_config(t, good);
    c.inputs.push_back(t / "in/bad_20201021.zip");
    CHECK_THROWS_AS(run_deid(c), InputError);
    CHECK_FALSE(fs::exists(c.output));

    c.inputs = {good};
    put(t / "bad_detections.json", "{");
    c.detections = t / "bad_detections.json";
    fs::create_directories(c.output);
    CHECK_THROWS_AS(run_deid(c), InputError);
    CHECK(fs::exists(c.output));
    CHECK(fs::is_empty(c.output));
  }

  TEST_CASE("media: omitted, placeholder or blurred") {
    TempDir t;
    const Image board = testing::checkerboard(120, 90, 6);
    const std::string jpg = *encode_jpeg(board);
    const Files files = {{"likes.json", R"([["2020-10-21T12:30:00+00:00","mary.k"]])"},
                         {"media/posts/a.jpg", jpg},
                         {"media/posts/b.jpg", jpg}};
    const fs::path zip = make_zip(t / "in", "owner_1_20201021", files);

    RunConfig omit = small_config(t, zip);
    const RunSummary s0 = run_deid(omit);
    CHECK(s0.media_omitted == 2);
    CHECK_FALSE(fs::exists(omit.output / s0.output_ddps[0] / "media"));
    CHECK(get(omit.output / kMediaLogName).find(",omitted,") != std::string::npos);

    RegionSet det;
    det["owner_1_20201021/media/posts/a.jpg"] = {Region{RegionKind::Face, std::nullopt, 30, 20, 40, 40, 5}};
    save_detections(det, t / "det.json");
    RunConfig with = small_config(t, zip);
    with.output = t / "out2";
    with.detections = t / "det.json";
    const RunSummary s1 = run_deid(with);
    CHECK(s1.media_files == 2);
    CHECK(s1.placeholders == 1);
    const fs::path root = with.output / s1.output_ddps[0];
    CHECK(fs::file_size(root / "media/posts/b.jpg") == 0);
    const auto blurred = load_image(root / "media/posts/a.jpg");
    const Image* original = &board;
    REQUIRE(blurred);
    // Inside the region the squares are washed out; far outside they survive re-encoding.
    auto at = [](const Image& img, int x, int y) { return static_cast<int>(img.at(x, y, 0)); };
    int inside = 0;
    int outside = 0;
    for (int y = 30; y < 50; ++y) {
      for (int x = 40; x < 60; ++x) inside += std::abs(at(*blurred, x, y) - at(*original, x, y));
    }
    for (int y = 0; y < 10; ++y) {
      for (int x = 100; x < 120; ++x) outside += std::abs(at(*blurred, x, y) - at(*original, x, y));
    }
    CHECK(inside / 400 > 40);
    CHECK(outside / 200 < 12);
    const std::string log = get(with.output / kMediaLogName);
    CHECK(log.find("media/posts/a.jpg,blurred,1") != std::string::npos);
    CHECK(log.find("media/posts/b.jpg,placeholder,0") != std::string::npos);
  }

  TEST_CASE("closed loop on a generated corpus") {
    TempDir t;
    CorpusSpec spec;
    spec.ddps = 3;
    spec.videos = 0;
    write_corpus(generate_corpus(21, spec), t / "corpus");
    RunConfig c;
    for (const auto& de : fs::directory_iterator(t / "corpus/raw")) c.inputs.push_back(de.path());
    c.output = t / "out";
    c.participants = t / "corpus/participants.csv";
    c.names = t / "corpus/names.txt";
    c.cap_sensitive = true;
    c.salt_hex = kSalt;
    c.save_keys = t / "keys.tsv";
    c.detections = t / "corpus/detections.json";
    const RunSummary s = run_deid(c);
    CHECK(s.ddps == 3);
    CHECK(s.placeholders == 0);

    EvalConfig e;
    e.raw = t / "corpus/raw";
    e.deid = c.output;
    e.keys = t / "keys.tsv";
    e.ground_truth = t / "corpus/ground_truth.tsv";
    e.report = t / "eval.csv";
    e.participants = t / "corpus/participants.csv";
    const Outcomes o = run_eval(e);
    const auto totals = totals_by_category(o);
    std::uint64_t n = 0;
    for (const auto& [cat, counts] : totals) {
      CAPTURE(to_string(cat));
      CHECK(counts.fn == 0);
      CHECK(counts.fp == 0);
      n += counts.tp;
    }
    CHECK(n == [&] {
      std::uint64_t sum = 0;
      for (const auto& l : load_ground_truth(t / "corpus/ground_truth.tsv")) sum += l.count;
      return sum;
    }());
    CHECK(get(t / "eval.csv").starts_with("ddp,file,category,total,tp,fn,fp,recall,precision,f1\n"));
  }
}
