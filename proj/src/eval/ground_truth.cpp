#include "eval/ground_truth.hpp"

#include <charconv>

#include "common/errors.hpp"
#include "common/text.hpp"

namespace ddpdeid {

std::string escape_tsv(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_tsv(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out.push_back(s[i]);
      continue;
    }
    switch (s[++i]) {
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default: out.push_back(s[i]);
    }
  }
  return out;
}

std::vector<GroundTruthLabel> parse_ground_truth(std::string_view text) {
  std::vector<GroundTruthLabel> out;
  std::size_t line_no = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (line_no == 1 && line.starts_with("ddp_id\t")) continue;
    const auto f = split(line, '\t');
    const std::string where = "ground truth line " + std::to_string(line_no);
    if (f.size() != 5) throw InputError(where + ": expected 5 tab-separated fields");
    const auto cat = parse_category(f[2]);
    if (!cat) throw InputError(where + ": unknown category '" + f[2] + "'");
    std::uint64_t count = 0;
    const auto [ptr, ec] = std::from_chars(f[4].data(), f[4].data() + f[4].size(), count);
    if (ec != std::errc() || ptr != f[4].data() + f[4].size() || count == 0) {
      throw InputError(where + ": count must be a positive integer");
    }
    if (f[0].empty() || f[1].empty() || f[3].empty()) throw InputError(where + ": empty field");
    out.push_back({f[0], f[1], *cat, unescape_tsv(f[3]), count});
  }
  return out;
}

std::vector<GroundTruthLabel> load_ground_truth(const std::filesystem::path& path) {
  return parse_ground_truth(read_file(path));
}

std::string format_ground_truth(const std::vector<GroundTruthLabel>& labels) {
  std::string out = "ddp_id\tfile\tcategory\tvalue\tcount\n";
  for (const auto& l : labels) {
    out += l.ddp_id + '\t' + l.file + '\t' + std::string(to_string(l.category)) + '\t' +
           escape_tsv(l.value) + '\t' + std::to_string(l.count) + '\n';
  }
  return out;
}

void save_ground_truth(const std::vector<GroundTruthLabel>& labels, const std::filesystem::path& path) {
  write_file(path, format_ground_truth(labels));
}

}  // namespace ddpdeid
