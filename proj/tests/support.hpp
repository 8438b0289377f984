#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <string_view>

#include "common/text.hpp"

namespace testing {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = fs::temp_directory_path() / ("ddpdeid-test-" + std::to_string(rng()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(std::string_view rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

inline void put(const fs::path& p, std::string_view data) { ddpdeid::write_file(p, data); }
inline std::string get(const fs::path& p) { return ddpdeid::read_file(p); }

// Random string over an alphabet, length in [lo, hi].
inline std::string random_string(std::mt19937& rng, std::string_view alphabet, std::size_t lo,
                                 std::size_t hi) {
  std::uniform_int_distribution<std::size_t> len(lo, hi);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s(len(rng), ' ');
  for (char& c : s) c = alphabet[pick(rng)];
  return s;
}

inline constexpr std::string_view kUsernameAlphabet =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.";

}  // namespace testing
