#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "eval/ground_truth.hpp"
#include "keymap/keymap.hpp"
#include "media/regions.hpp"

namespace ddpdeid {

// Quotas are per DDP. Every planted PII occurrence is one ground-truth count.
struct CorpusSpec {
  int ddps = 6;
  int usernames = 45;
  int names = 20;
  int emails = 8;
  int phones = 8;
  int instagram_urls = 8;
  int public_urls = 6;       // not PII; must survive unchanged
  int lowercase_names = 6;   // list names written in lowercase; PII only without cap sensitivity
  bool profile = true;
  int participants = 2;      // owners of the first DDPs listed in the participant file
  int images = 2;
  int videos = 1;
  // Files that carry username occurrences.
  std::vector<std::string> username_files = {"messages.json", "comments.json", "connections.json", "likes.json",
                                             "media.json"};

  static CorpusSpec parse(std::string_view json);
  // Throws InputError on an inconsistent spec.
  void validate() const;
  static CorpusSpec load(const std::filesystem::path& path);
};

struct SyntheticDdp {
  std::string ddp_id;
  std::map<std::string, std::string> files;  // rel_path -> bytes
};

struct Corpus {
  std::vector<SyntheticDdp> ddps;
  std::vector<GroundTruthLabel> truth;
  std::vector<ParticipantRow> participants;
  std::vector<std::string> names;  // name list for the run
  RegionSet detections;            // keyed "<ddp_id>/<rel_path>"
  std::vector<std::string> public_urls;
  std::vector<std::string> instagram_urls;
  std::vector<std::string> lowercase_names;
  // (as written, lowercase) for usernames planted with altered case.
  std::vector<std::pair<std::string, std::string>> username_variants;
};

Corpus generate_corpus(std::uint64_t seed, const CorpusSpec& spec = {});

// Layout: raw/<ddp_id>.zip, ground_truth.tsv, participants.csv, names.txt,
// detections.json, planted.json.
void write_corpus(const Corpus& corpus, const std::filesystem::path& out);

}  // namespace ddpdeid
