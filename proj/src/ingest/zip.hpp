#pragma once

// Just enough of PKZIP to read DDP archives (stored/deflate, zip64) and to
// write deterministic archives for generated corpora.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace ddpdeid::zip {

struct Entry {
  std::string name;  // raw entry name as stored
  std::uint16_t method = 0;
  std::uint16_t flags = 0;
  std::uint32_t crc32 = 0;
  std::uint64_t compressed_size = 0;
  std::uint64_t uncompressed_size = 0;
  std::uint64_t local_header_offset = 0;

  bool is_directory() const { return !name.empty() && name.back() == '/'; }
  bool is_encrypted() const { return (flags & 0x1) != 0; }
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& archive);

  const std::vector<Entry>& entries() const { return entries_; }
  std::string read(const Entry& entry);

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::uint64_t file_size_ = 0;
  std::vector<Entry> entries_;
};

// Entries are written in call order with a fixed 1980-01-01 timestamp, so
// identical inputs give identical archive bytes.
class Writer {
 public:
  explicit Writer(const std::filesystem::path& archive);
  ~Writer();
  Writer(const Writer&) = delete;
  Writer& operator=(const Writer&) = delete;

  void add(const std::string& name, std::string_view data);
  void close();

 private:
  std::ofstream out_;
  std::vector<Entry> written_;
  std::uint64_t offset_ = 0;
  bool closed_ = false;
};

bool looks_like_zip(const std::filesystem::path& path);

}  // namespace ddpdeid::zip
