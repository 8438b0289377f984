#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "../av_fixture.hpp"
#include "../media_oracle.hpp"
#include "common/text.hpp"
#include "eval/corpus.hpp"
#include "eval/ground_truth.hpp"
#include "eval/metrics.hpp"
#include "extract/lexical.hpp"
#include "extract/match.hpp"
#include "extract/structured.hpp"
#include "ingest/zip.hpp"
#include "keymap/keymap.hpp"
#include "media/blur.hpp"
#include "media/image.hpp"
#include "media/regions.hpp"
#include "textdeid/rewrite.hpp"

using namespace ddpdeid;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kSalt = "00112233445566778899aabbccddeeff00112233445566778899aabbccddeeff";
constexpr std::uint64_t kSeed = 20201021;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Workspace {
  fs::path root = fs::temp_directory_path() / fmt::format("ddpdeid-acceptance-{:08x}", std::random_device{}());
  Workspace() { fs::create_directories(root); }
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(root, ec);
  }
  fs::path operator/(std::string_view rel) const { return root / rel; }
};

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

class Cli {
 public:
  Cli(fs::path exe, fs::path log) : exe_(std::move(exe)), log_(std::move(log)) {}
  void operator()(const std::string& args) const {
    const std::string cmd = quote(exe_) + " " + args + " >>" + quote(log_) + " 2>&1";
    const int rc = std::system(cmd.c_str());
    expect(rc == 0, fmt::format("deid {} exited with {} (log: {})", args.substr(0, args.find(' ')), rc,
                                log_.string()));
  }

 private:
  fs::path exe_;
  fs::path log_;
};

// Every regular file below root by '/'-separated relative path.
std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& de : fs::recursive_directory_iterator(root)) {
    if (de.is_regular_file()) out[de.path().lexically_relative(root).generic_string()] = read_file(de.path());
  }
  return out;
}

std::string all_json(const fs::path& root) {
  std::string out;
  for (const auto& [rel, data] : tree(root)) {
    if (rel.ends_with(".json")) out += data + "\n";
  }
  return out;
}

std::string all_raw_json(const fs::path& raw_dir) {
  std::string out;
  for (const auto& de : fs::directory_iterator(raw_dir)) {
    zip::Reader r(de.path());
    for (const auto& e : r.entries()) {
      if (e.name.ends_with(".json")) out += r.read(e) + "\n";
    }
  }
  return out;
}

std::size_t count_substr(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string_view::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

std::vector<fs::path> children(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& de : fs::directory_iterator(dir)) out.push_back(de.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::string inputs_arg(const std::vector<fs::path>& paths) {
  std::string s;
  for (const auto& p : paths) s += " -i " + quote(p);
  return s;
}

// "all,total,<category>,..." rows of an evaluation report.
std::map<std::string, OutcomeCounts> eval_totals(const fs::path& report) {
  std::map<std::string, OutcomeCounts> out;
  for (const std::string& line : split(read_file(report), '\n')) {
    if (!line.starts_with("all,total,")) continue;
    const auto f = split(line, ',');
    if (f.size() < 7) continue;
    out[f[2]] = {std::stoull(f[4]), std::stoull(f[6]), std::stoull(f[5])};
  }
  return out;
}

std::vector<std::string> load_planted_lowercase(const fs::path& corpus) {
  return Json::parse(read_file(corpus / "planted.json"))["lowercase_names"].get<std::vector<std::string>>();
}

struct Context {
  Cli cli;
  Workspace ws;
  fs::path corpus;
  fs::path deid;
  std::string run_args;  // shared between the closed loop and the idempotence rerun
};

// ---- criteria ----

std::string metric_rows(Context&) {
  const auto t0 = Clock::now();
  struct Row {
    const char* label;
    OutcomeCounts counts;
    const char* recall;
    const char* precision;
    const char* f1;  // nullptr: not pinned
  };
  const Row rows[] = {
      {"email total", {218, 0, 0}, "1.0000", "1.0000", "1.0000"},
      {"phone total", {176, 24, 1}, "0.9943", "0.8800", "0.9337"},
      {"name total", {528, 0, 52}, "0.9103", "1.0000", nullptr},
      {"username likes.json", {823, 0, 60}, "0.9320", "1.0000", nullptr},
  };
  std::string notes;
  const auto check = [&](const char* label, const char* metric, std::optional<double> v, const char* printed) {
    if (!printed) return;
    expect(v.has_value(), fmt::format("{} {} undefined", label, metric));
    const std::string rounded = format_metric(v);
    const std::string truncated = fmt::format("{:.4f}", std::floor(*v * 1e4) / 1e4);
    expect(rounded == printed || truncated == printed,
           fmt::format("{} {}: computed {:.6f}, printed {}", label, metric, *v, printed));
    if (rounded != printed) notes += fmt::format("; {} {} {:.6f} printed truncated as {}", label, metric, *v, printed);
  };
  for (const Row& r : rows) {
    const Metrics m = compute_metrics(r.counts);
    check(r.label, "recall", m.recall, r.recall);
    check(r.label, "precision", m.precision, r.precision);
    check(r.label, "f1", m.f1, r.f1);
  }
  const double secs = seconds_since(t0);
  expect(secs < 1.0, fmt::format("took {:.3f} s", secs));
  return fmt::format("4 rows, {:.4f} s{}", secs, notes);
}

std::string closed_loop(Context& c) {
  const auto t0 = Clock::now();
  c.corpus = c.ws / "corpus";
  c.deid = c.ws / "deid";
  c.cli(fmt::format("gen --seed {} --out {}", kSeed, quote(c.corpus)));
  c.run_args = fmt::format(
      " --participants {} --names {} --cap-sensitive --salt {} --detections {}", quote(c.corpus / "participants.csv"),
      quote(c.corpus / "names.txt"), kSalt, quote(c.corpus / "detections.json"));
  c.cli("run" + inputs_arg(children(c.corpus / "raw")) + " -o " + quote(c.deid) + c.run_args + " --save-keys " +
        quote(c.ws / "keys.tsv"));
  c.cli(fmt::format("eval --raw {} --deid {} --keys {} --ground-truth {} --report {} --participants {}",
                    quote(c.corpus / "raw"), quote(c.deid), quote(c.ws / "keys.tsv"),
                    quote(c.corpus / "ground_truth.tsv"), quote(c.ws / "eval.csv"),
                    quote(c.corpus / "participants.csv")));
  const double secs = seconds_since(t0);

  std::uint64_t planted = 0;
  for (const auto& l : load_ground_truth(c.corpus / "ground_truth.tsv")) planted += l.count;
  const std::size_t ddps = children(c.corpus / "raw").size();
  expect(planted >= 500, fmt::format("only {} planted instances", planted));
  expect(ddps >= 5, fmt::format("only {} DDPs", ddps));
  const auto totals = eval_totals(c.ws / "eval.csv");
  std::string detail;
  for (Category cat : kAllCategories) {
    const std::string name(to_string(cat));
    const auto it = totals.find(name);
    expect(it != totals.end(), "no total for " + name);
    const Metrics m = compute_metrics(it->second);
    expect(m.recall == 1.0 && m.precision == 1.0,
           fmt::format("{}: tp {} fn {} fp {}", name, it->second.tp, it->second.fn, it->second.fp));
    detail += fmt::format(" {}={}", name, it->second.tp);
  }
  expect(secs < 60.0, fmt::format("took {:.1f} s", secs));
  return fmt::format("{} instances in {} DDPs, recall = precision = 1 ({}), {:.2f} s", planted, ddps,
                     detail.substr(1), secs);
}

std::string cap_sensitivity(Context& c) {
  const auto lowercase = load_planted_lowercase(c.corpus);
  expect(!lowercase.empty(), "no lowercase names planted");
  const std::string raw = all_raw_json(c.corpus / "raw");
  const std::set<std::string> distinct(lowercase.begin(), lowercase.end());
  std::size_t raw_total = 0;
  for (const auto& n : distinct) raw_total += count_occurrences(raw, n, MatchRule::WordExact, TextMode::Plain);

  const auto remaining = [&](const fs::path& out) {
    const std::string text = all_json(out);
    std::size_t n = 0;
    for (const auto& name : distinct) n += count_occurrences(text, name, MatchRule::WordExact, TextMode::Plain);
    return n;
  };
  const std::size_t kept = remaining(c.deid);
  expect(kept == raw_total, fmt::format("cap-sensitive run kept {} of {} lowercase names", kept, raw_total));

  const fs::path insensitive = c.ws / "deid_nocap";
  c.cli("run" + inputs_arg(children(c.corpus / "raw")) + " -o " + quote(insensitive) +
        fmt::format(" --participants {} --names {} --salt {} --skip-media", quote(c.corpus / "participants.csv"),
                    quote(c.corpus / "names.txt"), kSalt));
  const std::size_t left = remaining(insensitive);
  expect(left == 0, fmt::format("insensitive run left {} lowercase names", left));
  return fmt::format("{} planted lowercase names: all kept when cap-sensitive, none left otherwise", raw_total);
}

std::string username_case(Context& c) {
  const fs::path raw = c.ws / "case/raw";
  fs::create_directories(raw);
  {
    zip::Writer w(raw / "owner_1_20201021.zip");
    w.add("likes.json", R"([["2020-10-21T12:30:00+00:00","JDoe_99"]])");
    w.add("comments.json", R"([["2020-10-21T12:30:00+00:00","bedankt","jdoe_99"]])");
    w.add("messages/inbox/chat_1/message_1.json",
          R"({"participants":["owner_1","JDoe_99"],"messages":[{"sender":"jdoe_99","text":"hoi @JDOE_99"}]})");
    w.close();
  }
  const fs::path out = c.ws / "case/out";
  c.cli("run -i " + quote(raw / "owner_1_20201021.zip") + " -o " + quote(out) + " --salt " + kSalt +
        " --save-keys " + quote(c.ws / "case/keys.tsv"));
  const LoadedKeys keys = load_keys(c.ws / "case/keys.tsv");
  std::vector<std::string> codes;
  for (const auto& [k, e] : keys.map.entries()) {
    if (ascii_lower(k.value) == "jdoe_99") codes.push_back(e.code);
  }
  expect(codes.size() == 1, fmt::format("{} key entries for jdoe_99", codes.size()));
  const auto files = tree(out);
  std::size_t seen = 0;
  for (const auto& [rel, data] : files) {
    if (!rel.ends_with(".json") || rel.find('/') == std::string::npos) continue;
    expect(ascii_lower(data).find("jdoe_99") == std::string::npos, rel + " still holds the username");
    seen += count_substr(data, codes[0]);
  }
  expect(seen == 5, fmt::format("code {} appears {} times, want 5", codes[0], seen));
  return fmt::format("one entry, code {} used for all 5 spellings in 3 files", codes[0]);
}

std::string idempotence(Context& c) {
  const fs::path again = c.ws / "deid_again";
  std::vector<fs::path> ddps;
  for (const auto& p : children(c.deid)) {
    if (fs::is_directory(p)) ddps.push_back(p);
  }
  c.cli("run" + inputs_arg(ddps) + " -o " + quote(again) + c.run_args + " --skip-media");
  std::size_t compared = 0;
  for (const auto& p : ddps) {
    const auto before = tree(p);
    const auto after = tree(again / p.filename());
    for (const auto& [rel, data] : before) {
      if (!rel.ends_with(".json")) continue;
      const auto it = after.find(rel);
      expect(it != after.end(), p.filename().string() + "/" + rel + " missing from the second pass");
      expect(it->second == data, p.filename().string() + "/" + rel + " changed on the second pass");
      ++compared;
    }
  }
  expect(compared > 0, "no text files compared");
  return fmt::format("{} text files byte-identical after a second pass", compared);
}

std::string injectivity(Context&) {
  KeyMap map(Salt::from_hex(kSalt));
  std::mt19937_64 rng(kSeed);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789_.";
  std::set<std::string> values;
  std::set<std::string> codes;
  while (values.size() < 100000) {
    std::string v(6 + rng() % 12, ' ');
    for (char& ch : v) ch = alphabet[rng() % alphabet.size()];
    if (!is_username_like(v) || !values.insert(v).second) continue;
    codes.insert(map.assign({v, Category::Username, "likes.json", Rule::LabelValue, {}}));
  }
  expect(codes.size() == values.size(), fmt::format("{} codes for {} usernames", codes.size(), values.size()));
  return "100000 usernames, 100000 distinct codes";
}

std::string blur(Context& c) {
  const Image src = testing::checkerboard(200, 150, 7);
  Image out = src;
  const Region region{RegionKind::Face, std::nullopt, 60, 40, 50, 40, 5};
  const std::vector<Region> regions{region};
  blur_regions(out, regions);
  const double sigma = std::max(region.w, region.h) / 6.0;
  const int size = testing::oracle_kernel_size(sigma);
  const testing::Box box = testing::oracle_padded(region.x, region.y, region.w, region.h, src.width, src.height);
  int worst = 0;
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      for (int ch = 0; ch < src.channels; ++ch) {
        if (box.contains(x, y)) {
          const int want = static_cast<int>(std::lround(testing::oracle_pixel(src, x, y, ch, sigma, size)));
          worst = std::max(worst, std::abs(want - static_cast<int>(out.at(x, y, ch))));
        } else {
          expect(out.at(x, y, ch) == src.at(x, y, ch), fmt::format("pixel ({}, {}) outside the region changed", x, y));
        }
      }
    }
  }
  expect(worst <= 1, fmt::format("max deviation {} from the convolution oracle", worst));

  // A clip with an audio track through the full tool.
  const fs::path pkg = c.ws / "av/raw/owner_2_20201021";
  std::vector<Image> frames(6, testing::checkerboard(96, 64, 8));
  fs::create_directories(pkg / "media");
  expect(testing::write_av_clip(pkg / "media/clip.mp4", frames, 10, true), "could not write the fixture clip");
  const auto in_streams = testing::count_streams(pkg / "media/clip.mp4");
  expect(in_streams.audio == 1, "fixture clip has no audio");
  RegionSet det;
  det["media/clip.mp4"] = {Region{RegionKind::Face, std::nullopt, 20, 10, 30, 30, 5}};
  save_detections(det, c.ws / "av/det.json");
  const fs::path out_dir = c.ws / "av/out";
  c.cli("run -i " + quote(pkg) + " -o " + quote(out_dir) + " --salt " + kSalt + " --detections " +
        quote(c.ws / "av/det.json"));
  std::size_t videos = 0;
  for (const auto& dir : {out_dir, c.deid}) {
    for (const auto& de : fs::recursive_directory_iterator(dir)) {
      if (de.path().extension() != ".mp4") continue;
      const auto s = testing::count_streams(de.path());
      expect(s.video == 1, de.path().string() + " has no video stream");
      expect(s.audio == 0, de.path().string() + " still has audio");
      ++videos;
    }
  }
  expect(videos >= 2, "no output videos to check");
  return fmt::format("max deviation {} over the padded box, outside unchanged, {} videos without audio", worst,
                     videos);
}

std::string url_preservation(Context& c) {
  const Json planted = Json::parse(read_file(c.corpus / "planted.json"));
  const std::string raw = all_raw_json(c.corpus / "raw");
  const std::string out = all_json(c.deid);
  std::size_t kept = 0;
  for (const auto& u : planted["public_urls"]) {
    const std::string url = u.get<std::string>();
    const std::size_t before = count_substr(raw, url);
    const std::size_t after = count_substr(out, url);
    expect(before > 0 && after == before, fmt::format("{}: {} in raw, {} in output", url, before, after));
    kept += after;
  }
  std::size_t instagram = 0;
  for (const auto& u : planted["instagram_urls"]) instagram += count_substr(raw, u.get<std::string>());
  expect(instagram > 0, "no Instagram URLs planted");
  const std::size_t left = count_substr(ascii_lower(out), "instagram.com");
  expect(left == 0, fmt::format("{} Instagram URLs left", left));
  const std::size_t codes = count_substr(out, kUrlCode);
  expect(codes >= instagram, fmt::format("{} {} codes for {} planted Instagram URLs", codes, kUrlCode, instagram));
  return fmt::format("{} public URLs unchanged, {} Instagram URLs replaced", kept, instagram);
}

int zenodo(const fs::path& cli_path) {
  const char* dir_env = std::getenv("DDPDEID_ZENODO_DIR");
  if (!dir_env || !fs::is_directory(dir_env)) {
    fmt::print("SKIP zenodo: DDPDEID_ZENODO_DIR is not set\n");
    return 77;
  }
  const fs::path dir(dir_env);
  Workspace ws;
  Cli cli(cli_path, ws / "cli.log");
  try {
    std::string extra;
    if (fs::exists(dir / "participants.csv")) extra += " --participants " + quote(dir / "participants.csv");
    if (fs::exists(dir / "names.txt")) extra += " --names " + quote(dir / "names.txt");
    cli("run" + inputs_arg(children(dir / "raw")) + " -o " + quote(ws / "deid") + extra + " --skip-media --save-keys " +
        quote(ws / "keys.tsv"));
    cli(fmt::format("eval --raw {} --deid {} --keys {} --ground-truth {} --report {}{}", quote(dir / "raw"),
                    quote(ws / "deid"), quote(ws / "keys.tsv"), quote(dir / "ground_truth.tsv"),
                    quote(ws / "eval.csv"),
                    fs::exists(dir / "participants.csv") ? " --participants " + quote(dir / "participants.csv") : ""));
    const auto totals = eval_totals(ws / "eval.csv");
    const auto user = compute_metrics(totals.at("username")).recall;
    const auto email = compute_metrics(totals.at("email")).recall;
    expect(user && *user >= 0.95, fmt::format("username recall {}", format_metric(user)));
    expect(email && *email == 1.0, fmt::format("email recall {}", format_metric(email)));
    fmt::print("PASS zenodo: username recall {}, email recall {}\n", format_metric(user), format_metric(email));
    return 0;
  } catch (const std::exception& e) {
    fmt::print("FAIL zenodo: {}\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    fmt::print(stderr, "usage: {} <deid executable> [--zenodo]\n", argv[0]);
    return 2;
  }
  const fs::path cli_path = fs::absolute(argv[1]);
  if (argc > 2 && std::string_view(argv[2]) == "--zenodo") return zenodo(cli_path);

  Context ctx{Cli(cli_path, fs::temp_directory_path() / "ddpdeid-acceptance.log"), {}, {}, {}, {}};
  fs::remove(fs::temp_directory_path() / "ddpdeid-acceptance.log");
  const std::pair<const char*, std::function<std::string(Context&)>> criteria[] = {
      {"metric-formulas", metric_rows},       {"closed-loop", closed_loop},
      {"cap-sensitivity", cap_sensitivity},   {"username-case-consistency", username_case},
      {"idempotence", idempotence},           {"injectivity", injectivity},
      {"blur", blur},                         {"url-preservation", url_preservation},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    try {
      fmt::print("PASS {}: {}\n", name, fn(ctx));
    } catch (const std::exception& e) {
      fmt::print("FAIL {}: {}\n", name, e.what());
      ++failed;
    }
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", std::size(criteria) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
