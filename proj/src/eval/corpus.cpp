#include "eval/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <random>
#include <set>

#include "common/errors.hpp"
#include "common/text.hpp"
#include "extract/structured.hpp"
#include "ingest/zip.hpp"
#include "keymap/keymap.hpp"
#include "media/media_io.hpp"

namespace fs = std::filesystem;

namespace ddpdeid {
namespace {

constexpr std::array kFirstNames = {
    "Anna",  "Bram",  "Daan",  "Emma",   "Fenna", "Finn",  "Iris",  "Jesse", "Julia", "Lars",
    "Lotte", "Luuk",  "Mila",  "Noah",   "Nora",  "Sanne", "Sem",   "Sophie", "Thijs", "Tess",
    "Vera",  "Wouter", "Yara", "Zoe",    "Ruben", "Lieke", "Koen",  "Femke", "Joris", "Maud"};
constexpr std::array kSurnames = {"Jansen", "Visser", "Smit", "Meijer", "Mulder", "Bos", "Vos", "Peters",
                                  "Hendriks", "Dekker"};
// Name-list entries that are also everyday Dutch words.
constexpr std::array kWordNames = {"ben", "roos", "merel", "hoop", "storm", "bas"};
constexpr std::array kFiller = {"ik",     "vandaag", "blij",   "morgen", "leuk",   "echt",  "nice",  "pic",
                                "see",    "you",     "later",  "thanks", "great",  "photo", "weekend", "wow",
                                "super",  "mooi",    "samen",  "lunch",  "strand", "fiets", "regen", "zon",
                                "koffie", "film",    "avond",  "feest",  "school", "werk"};
constexpr std::array kHandles = {"horses", "sunny", "pixel", "tiger",  "maple",  "river", "cookie", "rocket",
                                 "lemon",  "cloud", "panda", "forest", "violet", "comet", "bubble", "falcon"};
constexpr std::array kPublicHosts = {"news.example.org", "weather.example.net", "recipes.example.com",
                                     "www.museum.example.org"};
constexpr std::string_view kCodeChars = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_-";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }
  template <typename C>
  const auto& pick(const C& c) {
    return c[below(std::size(c))];
  }
  std::string digits(int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + below(10)));
    return s;
  }

 private:
  std::mt19937_64 eng_;
};

std::string timestamp(Rng& rng) {
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}+00:00", 2019 + rng.below(2), 1 + rng.below(12),
                     1 + rng.below(28), rng.below(24), rng.below(60), rng.below(60));
}

std::string filler(Rng& rng, int lo, int hi) {
  const int n = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out.push_back(' ');
    out += rng.pick(kFiller);
  }
  return out;
}

std::string sentence(Rng& rng, std::string_view token) {
  return filler(rng, 1, 3) + ' ' + std::string(token) + ' ' + filler(rng, 1, 3);
}

std::string case_variant(Rng& rng, std::string_view s) {
  std::string out(s);
  bool changed = false;
  for (char& c : out) {
    if (is_ascii_alpha(static_cast<unsigned char>(c)) && rng.below(2)) {
      c = static_cast<char>(c - 'a' + 'A');
      changed = true;
    }
  }
  if (!changed) {
    for (char& c : out) {
      if (is_ascii_alpha(static_cast<unsigned char>(c))) {
        c = static_cast<char>(c - 'a' + 'A');
        break;
      }
    }
  }
  return out;
}

Image synthetic_image(Rng& rng, int w, int h, std::vector<Region>& regions, std::optional<int> frame) {
  Image img(w, h, 3);
  const int base = static_cast<int>(rng.below(80));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
      img.data[i] = static_cast<std::uint8_t>(base + x * 100 / w);
      img.data[i + 1] = static_cast<std::uint8_t>(base + y * 100 / h);
      img.data[i + 2] = static_cast<std::uint8_t>(120);
    }
  }
  // Skin-toned ellipse for the face, striped bar for the text.
  const int fw = w / 4 + static_cast<int>(rng.below(static_cast<std::uint64_t>(w / 8)));
  const int fh = fw * 5 / 4;
  const int fx = static_cast<int>(rng.below(static_cast<std::uint64_t>(w / 2 - fw / 2))) + 2;
  const int fy = static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, h / 2 - fh / 2)))) + 2;
  for (int y = fy; y < std::min(h, fy + fh); ++y) {
    for (int x = fx; x < std::min(w, fx + fw); ++x) {
      const double dx = (x - fx - fw / 2.0) / (fw / 2.0);
      const double dy = (y - fy - fh / 2.0) / (fh / 2.0);
      if (dx * dx + dy * dy > 1) continue;
      const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
      img.data[i] = 140;
      img.data[i + 1] = 170;
      img.data[i + 2] = 230;
    }
  }
  regions.push_back({RegionKind::Face, frame, fx, fy, fw, std::min(fh, h - fy), 5});
  const int tw = w / 3;
  const int th = std::max(6, h / 10);
  const int tx = w - tw - 4;
  const int ty = h - th - 4;
  for (int y = ty; y < ty + th; ++y) {
    for (int x = tx; x < tx + tw; ++x) {
      const std::uint8_t v = ((x / 3) % 2) ? 255 : 0;
      const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
      img.data[i] = img.data[i + 1] = img.data[i + 2] = v;
    }
  }
  regions.push_back({RegionKind::Text, frame, tx, ty, tw, th, std::nullopt});
  return img;
}

std::string encode_clip(Rng& rng, const fs::path& scratch, std::vector<Region>& regions) {
  constexpr int kW = 96, kH = 64, kFrames = 6;
  const fs::path tmp = scratch / "clip.mp4";
  OpenCvTranscoder transcoder("mp4v");
  auto writer = transcoder.open_writer(tmp, {kW, kH, 10.0});
  if (!writer) throw InvariantError("video encoder unavailable for corpus generation");
  for (int f = 0; f < kFrames; ++f) {
    std::vector<Region> frame_regions;
    const Image img = synthetic_image(rng, kW, kH, frame_regions, f);
    if (f == 2) regions.insert(regions.end(), frame_regions.begin(), frame_regions.end());
    writer->write(img);
  }
  writer->close();
  std::string bytes = read_file(tmp);
  fs::remove(tmp);
  return bytes;
}

struct Builder {
  const CorpusSpec& spec;
  Rng& rng;
  Corpus& corpus;
  const std::set<std::string>& owners;
  std::map<std::tuple<std::string, std::string, Category, std::string>, std::uint64_t> counts{};

  std::string ddp_id{};
  std::vector<std::string> friends{};
  std::vector<std::string> extractable{};

  Json messages = Json::object();
  Json comments = Json::object();
  Json connections = Json::object();
  Json likes = Json::object();
  Json media = Json::object();

  Category user_category(const std::string& u) const {
    return owners.contains(u) ? Category::DdpId : Category::Username;
  }

  void plant(const std::string& file, Category cat, const std::string& value) {
    const bool fold = cat == Category::Username || cat == Category::DdpId || cat == Category::Email ||
                      cat == Category::Url;
    ++counts[{ddp_id, file, cat, fold ? ascii_lower(value) : value}];
  }
  void plant_user(const std::string& file, const std::string& u) { plant(file, user_category(u), u); }

  Json& conversation() {
    Json& convs = messages["conversations"];
    if (convs.empty() || convs.back()["messages"].size() >= 6) {
      convs.push_back({{"title", filler(rng, 1, 2)}, {"participants", Json::array()}, {"messages", Json::array()}});
    }
    return convs.back();
  }

  void add_message_text(const std::string& text) {
    conversation()["messages"].push_back({{"created_at", timestamp(rng)}, {"text", text}});
  }

  void add_caption(const std::string& text) {
    media["photos"].push_back({{"caption", text},
                               {"taken_at", timestamp(rng)},
                               {"path", fmt::format("media/photos/img_{}.jpg", media["photos"].size() + 1)}});
  }

  // Free-text carrier for a non-username token.
  void add_text(const std::string& token, std::uint64_t turn) {
    const bool has_media = std::find(spec.username_files.begin(), spec.username_files.end(), "media.json") !=
                           spec.username_files.end();
    if (has_media && turn % 3 == 2) {
      add_caption(sentence(rng, token));
    } else {
      add_message_text(sentence(rng, token));
    }
  }
  std::string text_file(std::uint64_t turn) const {
    const bool has_media = std::find(spec.username_files.begin(), spec.username_files.end(), "media.json") !=
                           spec.username_files.end();
    return has_media && turn % 3 == 2 ? "media.json" : "messages.json";
  }

  void username_unit(const std::string& file, int k) {
    std::string u = rng.pick(friends);
    if (file == "messages.json") {
      switch (k % 5) {
        case 0: {
          if (k % 10 == 0) u = friends.front();
          conversation()["messages"].push_back(
              {{"sender", u}, {"created_at", timestamp(rng)}, {"text", filler(rng, 2, 5)}});
          extractable.push_back(u);
          break;
        }
        case 1: {
          Json& parts = conversation()["participants"];
          parts.push_back(u);
          extractable.push_back(u);
          break;
        }
        case 2: {
          std::string written = u;
          if (k % 3 == 0) {
            written = case_variant(rng, u);
            corpus.username_variants.emplace_back(written, u);
          }
          add_message_text(sentence(rng, "@" + written));
          extractable.push_back(u);
          break;
        }
        case 3: {
          const char* apostrophe = k % 2 ? "'" : "\xE2\x80\x99";
          add_message_text(filler(rng, 0, 2) + (k % 4 ? " " : "") + "Shared " + u + apostrophe + "s story");
          extractable.push_back(u);
          break;
        }
        default: {
          if (extractable.empty()) {
            add_message_text(sentence(rng, "@" + u));
            extractable.push_back(u);
            break;
          }
          u = rng.pick(extractable);
          const std::string written = case_variant(rng, u);
          corpus.username_variants.emplace_back(written, u);
          add_message_text(sentence(rng, written));
          break;
        }
      }
      plant_user(file, u);
    } else if (file == "comments.json") {
      comments["media_comments"].push_back(Json::array({timestamp(rng), filler(rng, 2, 4) + "!", u}));
      plant_user(file, u);
      extractable.push_back(u);
    } else if (file == "likes.json") {
      likes["media_likes"].push_back(Json::array({timestamp(rng), u}));
      plant_user(file, u);
      extractable.push_back(u);
    } else if (file == "connections.json") {
      static constexpr std::array kLists = {"followers", "following", "close_friends"};
      for (int attempt = 0; attempt < 64; ++attempt) {
        Json& list = connections[rng.pick(kLists)];
        if (list.is_null()) list = Json::object();
        if (!list.contains(u)) {
          list[u] = timestamp(rng);
          plant_user(file, u);
          extractable.push_back(u);
          return;
        }
        u = rng.pick(friends);
      }
      // Every friend is already listed everywhere; fall back to a tag.
      add_message_text(sentence(rng, "@" + u));
      plant_user("messages.json", u);
    } else if (file == "media.json") {
      add_caption(sentence(rng, "@" + u));
      plant_user(file, u);
      extractable.push_back(u);
    } else {
      throw InputError("corpus spec: unsupported username file '" + file + "'");
    }
  }
};

std::string make_username(Rng& rng, std::set<std::string>& taken) {
  for (;;) {
    std::string u = rng.pick(kHandles);
    switch (rng.below(4)) {
      case 0: u += rng.digits(2); break;
      case 1: u += "_" + rng.digits(1 + static_cast<int>(rng.below(3))); break;
      case 2: u += "." + std::string(rng.pick(kHandles)) + rng.digits(1); break;
      default: u += "_" + std::string(rng.pick(kHandles)); break;
    }
    if (taken.insert(u).second) return u;
  }
}

std::string make_phone(Rng& rng) {
  switch (rng.below(3)) {
    case 0: return "+31 6 " + rng.digits(8);
    case 1: return "06-" + rng.digits(8);
    default: return "06" + rng.digits(8);
  }
}

std::string make_instagram_url(Rng& rng, const std::vector<std::string>& friends) {
  switch (rng.below(3)) {
    case 0: {
      std::string code;
      for (int i = 0; i < 11; ++i) code.push_back(kCodeChars[rng.below(kCodeChars.size())]);
      return "https://www.instagram.com/p/" + code + "/";
    }
    case 1: return "instagram.com/" + rng.pick(friends);
    default: return "https://instagram.com/stories/" + rng.pick(friends) + "/" + rng.digits(6) + "/";
  }
}

}  // namespace

CorpusSpec CorpusSpec::parse(std::string_view text) {
  const Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw InputError("corpus spec: expected a JSON object");
  CorpusSpec s;
  const std::map<std::string, int*> ints = {
      {"ddps", &s.ddps},           {"usernames", &s.usernames},           {"names", &s.names},
      {"emails", &s.emails},       {"phones", &s.phones},                 {"instagram_urls", &s.instagram_urls},
      {"public_urls", &s.public_urls}, {"lowercase_names", &s.lowercase_names}, {"participants", &s.participants},
      {"images", &s.images},       {"videos", &s.videos}};
  for (const auto& [key, value] : j.items()) {
    if (auto it = ints.find(key); it != ints.end()) {
      if (!value.is_number_integer() || value.get<int>() < 0) throw InputError("corpus spec: '" + key + "' must be a non-negative integer");
      *it->second = value.get<int>();
    } else if (key == "profile") {
      if (!value.is_boolean()) throw InputError("corpus spec: 'profile' must be a boolean");
      s.profile = value.get<bool>();
    } else if (key == "username_files") {
      if (!value.is_array()) throw InputError("corpus spec: 'username_files' must be a list");
      s.username_files.clear();
      for (const auto& f : value) {
        if (!f.is_string()) throw InputError("corpus spec: 'username_files' must hold strings");
        s.username_files.push_back(f.get<std::string>());
      }
    } else {
      throw InputError("corpus spec: unknown field '" + key + "'");
    }
  }
  s.validate();
  return s;
}

void CorpusSpec::validate() const {
  if (ddps < 1) throw InputError("corpus spec: 'ddps' must be at least 1");
  if (usernames > 0 && username_files.empty()) throw InputError("corpus spec: no username files");
  if (participants > ddps) throw InputError("corpus spec: more participants than DDPs");
}

CorpusSpec CorpusSpec::load(const fs::path& path) { return parse(read_file(path)); }

Corpus generate_corpus(std::uint64_t seed, const CorpusSpec& spec) {
  spec.validate();
  Rng rng(seed);
  Corpus corpus;

  std::set<std::string> taken;
  std::vector<std::string> owners_list;
  for (int d = 0; d < spec.ddps; ++d) owners_list.push_back(make_username(rng, taken));
  std::vector<std::string> pool;
  for (int i = 0; i < 10 * spec.ddps + 10; ++i) pool.push_back(make_username(rng, taken));
  const std::set<std::string> owners(owners_list.begin(), owners_list.end());

  for (const char* n : kFirstNames) corpus.names.push_back(n);
  for (const char* n : kWordNames) corpus.names.push_back(n);

  for (int p = 0; p < spec.participants; ++p) {
    corpus.participants.push_back({owners_list[static_cast<std::size_t>(p)], "", fmt::format("PP{:02}", p + 1)});
  }

  const fs::path scratch = fs::temp_directory_path() / fmt::format("ddpdeid-gen-{:08x}", std::random_device{}());
  fs::create_directories(scratch);
  std::set<std::string> public_seen;

  std::map<std::tuple<std::string, std::string, Category, std::string>, std::uint64_t> counts;
  for (int d = 0; d < spec.ddps; ++d) {
    const std::string owner = owners_list[static_cast<std::size_t>(d)];
    Builder b{spec, rng, corpus, owners};
    b.ddp_id = owner + "_20201021";
    // The owner sends some messages; other owners show up as contacts.
    b.friends.push_back(owner);
    for (int f = 0; f < 12; ++f) b.friends.push_back(rng.pick(pool));
    if (spec.ddps > 1) b.friends.push_back(owners_list[static_cast<std::size_t>((d + 1) % spec.ddps)]);
    std::sort(b.friends.begin() + 1, b.friends.end());
    b.friends.erase(std::unique(b.friends.begin() + 1, b.friends.end()), b.friends.end());

    for (int k = 0; k < spec.usernames; ++k) {
      const std::string& file = spec.username_files[static_cast<std::size_t>(k) % spec.username_files.size()];
      b.username_unit(file, k / static_cast<int>(spec.username_files.size()));
    }
    std::uint64_t turn = 0;
    for (int k = 0; k < spec.names; ++k, ++turn) {
      const std::string n = rng.pick(kFirstNames);
      b.add_text(n + (k % 4 == 1 ? "," : ""), turn);
      b.plant(b.text_file(turn), Category::Name, n);
    }
    for (int k = 0; k < spec.emails; ++k, ++turn) {
      const std::string e = fmt::format("{}.{}{}@{}.example.com", rng.pick(kHandles), rng.pick(kFiller),
                                        rng.digits(2), rng.pick(kHandles));
      b.add_text(e, turn);
      b.plant(b.text_file(turn), Category::Email, e);
    }
    for (int k = 0; k < spec.phones; ++k, ++turn) {
      const std::string p = make_phone(rng);
      b.add_text(p, turn);
      b.plant(b.text_file(turn), Category::Phone, p);
    }
    for (int k = 0; k < spec.instagram_urls; ++k, ++turn) {
      const std::string u = make_instagram_url(rng, b.friends);
      b.add_text(u, turn);
      b.plant(b.text_file(turn), Category::Url, u);
      corpus.instagram_urls.push_back(u);
    }
    for (int k = 0; k < spec.public_urls; ++k, ++turn) {
      const std::string u =
          fmt::format("https://{}/{}/{}-{}", rng.pick(kPublicHosts), rng.pick(kFiller), rng.pick(kFiller),
                      1 + rng.below(99));
      b.add_text(u, turn);
      if (public_seen.insert(u).second) corpus.public_urls.push_back(u);
    }
    for (int k = 0; k < spec.lowercase_names; ++k, ++turn) {
      const std::string n = rng.pick(kWordNames);
      b.add_text(n, turn);
      corpus.lowercase_names.push_back(n);
    }

    SyntheticDdp ddp{b.ddp_id, {}};
    if (spec.profile) {
      const std::string full = fmt::format("{} {}", rng.pick(kFirstNames), rng.pick(kSurnames));
      const std::string email = fmt::format("{}{}@{}.example.com", rng.pick(kHandles), rng.digits(3), rng.pick(kHandles));
      const std::string phone = make_phone(rng);
      const std::string site = fmt::format("https://www.{}-{}.example.com/{}", rng.pick(kHandles), rng.pick(kHandles),
                                           rng.pick(kFiller));
      const Json profile = {{"username", owner}, {"name", full}, {"email", email}, {"phone_number", phone},
                            {"website", site},   {"private_account", true}};
      ddp.files["profile.json"] = profile.dump(2);
      b.plant("profile.json", Category::DdpId, owner);
      b.plant("profile.json", Category::Name, full);
      b.plant("profile.json", Category::Email, email);
      b.plant("profile.json", Category::Phone, phone);
      b.plant("profile.json", Category::Url, site);
    }

    std::vector<Region> regions;
    for (int i = 0; i < spec.images; ++i) {
      const std::string rel = fmt::format("media/photos/img_{}.jpg", i + 1);
      regions.clear();
      const Image img = synthetic_image(rng, 160, 120, regions, std::nullopt);
      const auto bytes = encode_jpeg(img);
      if (!bytes) throw InvariantError("could not encode a synthetic image");
      ddp.files[rel] = *bytes;
      corpus.detections[b.ddp_id + "/" + rel] = regions;
      b.add_caption(filler(rng, 2, 4));
    }
    for (int i = 0; i < spec.videos; ++i) {
      const std::string rel = fmt::format("media/videos/clip_{}.mp4", i + 1);
      regions.clear();
      ddp.files[rel] = encode_clip(rng, scratch, regions);
      corpus.detections[b.ddp_id + "/" + rel] = regions;
    }

    const auto put = [&](const char* name, const Json& j) {
      if (!j.empty()) ddp.files[name] = j.dump(2);
    };
    put("messages.json", b.messages);
    put("comments.json", b.comments);
    put("connections.json", b.connections);
    put("likes.json", b.likes);
    put("media.json", b.media);
    // Irrelevant files that must never reach the output.
    ddp.files["autofill.json"] = Json({{"email", "autofill" + rng.digits(3) + "@example.com"}}).dump(2);
    ddp.files["account_history.json"] = Json({{"login_history", Json::array({timestamp(rng)})}}).dump(2);
    ddp.files["readme.txt"] = "export notes\n";
    corpus.ddps.push_back(std::move(ddp));
    for (const auto& [key, n] : b.counts) counts[key] += n;
  }
  std::error_code ec;
  fs::remove_all(scratch, ec);

  for (const auto& [key, n] : counts) {
    const auto& [ddp, file, cat, value] = key;
    corpus.truth.push_back({ddp, file, cat, value, n});
  }
  return corpus;
}

void write_corpus(const Corpus& corpus, const fs::path& out) {
  fs::create_directories(out / "raw");
  for (const SyntheticDdp& ddp : corpus.ddps) {
    zip::Writer w(out / "raw" / (ddp.ddp_id + ".zip"));
    for (const auto& [rel, bytes] : ddp.files) w.add(rel, bytes);
    w.close();
  }
  save_ground_truth(corpus.truth, out / "ground_truth.tsv");
  std::string csv = "username,name,participant_id\n";
  for (const ParticipantRow& r : corpus.participants) {
    csv += csv_escape(r.username) + ',' + csv_escape(r.name) + ',' + csv_escape(r.participant_id) + '\n';
  }
  write_file(out / "participants.csv", csv);
  std::string names;
  for (const std::string& n : corpus.names) names += n + '\n';
  write_file(out / "names.txt", names);
  save_detections(corpus.detections, out / "detections.json");
  Json planted = {{"public_urls", corpus.public_urls},
                  {"instagram_urls", corpus.instagram_urls},
                  {"lowercase_names", corpus.lowercase_names},
                  {"username_variants", Json::array()}};
  for (const auto& [written, lower] : corpus.username_variants) {
    planted["username_variants"].push_back(Json::array({written, lower}));
  }
  write_file(out / "planted.json", planted.dump(2) + "\n");
}

}  // namespace ddpdeid
