#include "ingest/zip.hpp"

#include <zlib.h>

#include <array>
#include <limits>

#include "common/errors.hpp"

namespace ddpdeid::zip {
namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEocdSig = 0x06054b50;
constexpr std::uint32_t kEocd64Sig = 0x06064b50;
constexpr std::uint32_t kEocd64LocatorSig = 0x07064b50;
constexpr std::uint16_t kDosDate1980 = (0 << 9) | (1 << 5) | 1;

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}
std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}
std::uint64_t le64(const unsigned char* p) {
  return static_cast<std::uint64_t>(le32(p)) | static_cast<std::uint64_t>(le32(p + 4)) << 32;
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}
void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::string read_at(std::ifstream& in, std::uint64_t offset, std::size_t n) {
  std::string buf(n, '\0');
  in.clear();
  in.seekg(static_cast<std::streamoff>(offset));
  in.read(buf.data(), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw InputError("truncated zip archive");
  return buf;
}

std::string inflate_raw(std::string_view compressed, std::uint64_t expected) {
  if (expected > std::numeric_limits<std::size_t>::max() / 2) {
    throw InputError("zip entry too large");
  }
  std::string out(static_cast<std::size_t>(expected), '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw InputError("zlib init failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  zs.avail_in = static_cast<uInt>(compressed.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  // Tolerate a zero-length entry stored with an empty deflate stream.
  const bool ok = rc == Z_STREAM_END || (expected == 0 && rc == Z_BUF_ERROR);
  const auto produced = zs.total_out;
  inflateEnd(&zs);
  if (!ok || produced != expected) throw InputError("corrupt deflate stream in zip entry");
  return out;
}

std::string deflate_raw(std::string_view data) {
  z_stream zs{};
  if (deflateInit2(&zs, 6, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw InputError("zlib init failed");
  }
  std::string out(deflateBound(&zs, static_cast<uLong>(data.size())), '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw InputError("deflate failed");
  return out;
}

}  // namespace

Reader::Reader(const std::filesystem::path& archive) : path_(archive) {
  in_.open(archive, std::ios::binary);
  if (!in_) throw InputError("cannot open archive " + archive.string());
  in_.seekg(0, std::ios::end);
  file_size_ = static_cast<std::uint64_t>(in_.tellg());
  if (file_size_ < 22) throw InputError("not a zip archive: " + archive.string());

  // End-of-central-directory record sits in the last 64 KiB + 22 bytes.
  const std::uint64_t tail_len = std::min<std::uint64_t>(file_size_, 0xFFFF + 22);
  const std::string tail = read_at(in_, file_size_ - tail_len, tail_len);
  const auto* t = reinterpret_cast<const unsigned char*>(tail.data());
  std::int64_t eocd = -1;
  for (std::int64_t i = static_cast<std::int64_t>(tail_len) - 22; i >= 0; --i) {
    if (le32(t + i) == kEocdSig) {
      eocd = i;
      break;
    }
  }
  if (eocd < 0) throw InputError("not a zip archive: " + archive.string());

  std::uint64_t count = le16(t + eocd + 10);
  std::uint64_t cd_size = le32(t + eocd + 12);
  std::uint64_t cd_offset = le32(t + eocd + 16);

  if (eocd >= 20 && le32(t + eocd - 20) == kEocd64LocatorSig) {
    const std::uint64_t eocd64_offset = le64(t + eocd - 20 + 8);
    const std::string rec = read_at(in_, eocd64_offset, 56);
    const auto* r = reinterpret_cast<const unsigned char*>(rec.data());
    if (le32(r) != kEocd64Sig) throw InputError("corrupt zip64 directory");
    count = le64(r + 32);
    cd_size = le64(r + 40);
    cd_offset = le64(r + 48);
  }
  if (cd_offset + cd_size > file_size_) throw InputError("corrupt zip central directory");

  const std::string cd = read_at(in_, cd_offset, static_cast<std::size_t>(cd_size));
  const auto* p = reinterpret_cast<const unsigned char*>(cd.data());
  std::size_t pos = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    if (pos + 46 > cd.size() || le32(p + pos) != kCentralSig) {
      throw InputError("corrupt zip central directory");
    }
    Entry e;
    e.flags = le16(p + pos + 8);
    e.method = le16(p + pos + 10);
    e.crc32 = le32(p + pos + 16);
    e.compressed_size = le32(p + pos + 20);
    e.uncompressed_size = le32(p + pos + 24);
    const std::uint16_t name_len = le16(p + pos + 28);
    const std::uint16_t extra_len = le16(p + pos + 30);
    const std::uint16_t comment_len = le16(p + pos + 32);
    e.local_header_offset = le32(p + pos + 42);
    if (pos + 46 + name_len + extra_len + comment_len > cd.size()) {
      throw InputError("corrupt zip central directory");
    }
    e.name.assign(cd, pos + 46, name_len);

    // zip64 extended information replaces saturated 32-bit fields in order.
    std::size_t x = pos + 46 + name_len;
    const std::size_t x_end = x + extra_len;
    while (x + 4 <= x_end) {
      const std::uint16_t id = le16(p + x);
      const std::uint16_t len = le16(p + x + 2);
      if (id == 0x0001) {
        std::size_t f = x + 4;
        const auto take = [&](std::uint64_t& field) {
          if (field == 0xFFFFFFFFu && f + 8 <= x + 4 + len) {
            field = le64(p + f);
            f += 8;
          }
        };
        take(e.uncompressed_size);
        take(e.compressed_size);
        take(e.local_header_offset);
      }
      x += 4 + len;
    }
    entries_.push_back(std::move(e));
    pos += 46 + name_len + extra_len + comment_len;
  }
}

std::string Reader::read(const Entry& entry) {
  if (entry.is_encrypted()) {
    throw InputError("password-protected archive entries are not supported: " + entry.name);
  }
  const std::string header = read_at(in_, entry.local_header_offset, 30);
  const auto* h = reinterpret_cast<const unsigned char*>(header.data());
  if (le32(h) != kLocalSig) throw InputError("corrupt zip local header: " + entry.name);
  const std::uint64_t data_offset =
      entry.local_header_offset + 30 + le16(h + 26) + le16(h + 28);
  if (data_offset + entry.compressed_size > file_size_) {
    throw InputError("truncated zip entry: " + entry.name);
  }
  std::string raw = read_at(in_, data_offset, static_cast<std::size_t>(entry.compressed_size));
  std::string data;
  if (entry.method == 0) {
    data = std::move(raw);
  } else if (entry.method == 8) {
    data = inflate_raw(raw, entry.uncompressed_size);
  } else {
    throw InputError("unsupported zip compression method " + std::to_string(entry.method) +
                     " for " + entry.name);
  }
  const auto crc = static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
  if (crc != entry.crc32) throw InputError("CRC mismatch in zip entry " + entry.name);
  return data;
}

Writer::Writer(const std::filesystem::path& archive) {
  if (archive.has_parent_path()) std::filesystem::create_directories(archive.parent_path());
  out_.open(archive, std::ios::binary | std::ios::trunc);
  if (!out_) throw InputError("cannot create archive " + archive.string());
}

Writer::~Writer() {
  if (!closed_) {
    try {
      close();
    } catch (...) {
    }
  }
}

void Writer::add(const std::string& name, std::string_view data) {
  if (data.size() > 0xFFFFFFF0u || offset_ > 0xFFFFFFF0u) {
    throw InputError("archive too large for the generator: " + name);
  }
  const std::string compressed = deflate_raw(data);
  Entry e;
  e.name = name;
  e.method = 8;
  e.flags = 0x0800;  // UTF-8 names
  e.crc32 = static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
  e.compressed_size = compressed.size();
  e.uncompressed_size = data.size();
  e.local_header_offset = offset_;

  std::string hdr;
  put32(hdr, kLocalSig);
  put16(hdr, 20);
  put16(hdr, e.flags);
  put16(hdr, e.method);
  put16(hdr, 0);
  put16(hdr, kDosDate1980);
  put32(hdr, e.crc32);
  put32(hdr, static_cast<std::uint32_t>(e.compressed_size));
  put32(hdr, static_cast<std::uint32_t>(e.uncompressed_size));
  put16(hdr, static_cast<std::uint16_t>(name.size()));
  put16(hdr, 0);
  hdr += name;
  out_.write(hdr.data(), static_cast<std::streamsize>(hdr.size()));
  out_.write(compressed.data(), static_cast<std::streamsize>(compressed.size()));
  offset_ += hdr.size() + compressed.size();
  written_.push_back(std::move(e));
}

void Writer::close() {
  if (closed_) return;
  closed_ = true;
  std::string cd;
  for (const Entry& e : written_) {
    put32(cd, kCentralSig);
    put16(cd, 20);
    put16(cd, 20);
    put16(cd, e.flags);
    put16(cd, e.method);
    put16(cd, 0);
    put16(cd, kDosDate1980);
    put32(cd, e.crc32);
    put32(cd, static_cast<std::uint32_t>(e.compressed_size));
    put32(cd, static_cast<std::uint32_t>(e.uncompressed_size));
    put16(cd, static_cast<std::uint16_t>(e.name.size()));
    put16(cd, 0);
    put16(cd, 0);
    put16(cd, 0);
    put16(cd, 0);
    put32(cd, 0);
    put32(cd, static_cast<std::uint32_t>(e.local_header_offset));
    cd += e.name;
  }
  std::string eocd;
  put32(eocd, kEocdSig);
  put16(eocd, 0);
  put16(eocd, 0);
  put16(eocd, static_cast<std::uint16_t>(written_.size()));
  put16(eocd, static_cast<std::uint16_t>(written_.size()));
  put32(eocd, static_cast<std::uint32_t>(cd.size()));
  put32(eocd, static_cast<std::uint32_t>(offset_));
  put16(eocd, 0);
  out_.write(cd.data(), static_cast<std::streamsize>(cd.size()));
  out_.write(eocd.data(), static_cast<std::streamsize>(eocd.size()));
  out_.close();
  if (!out_) throw InputError("failed to finalize archive");
}

bool looks_like_zip(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::array<unsigned char, 4> sig{};
  in.read(reinterpret_cast<char*>(sig.data()), 4);
  if (in.gcount() != 4) return false;
  const std::uint32_t v = le32(sig.data());
  return v == kLocalSig || v == kEocdSig;
}

}  // namespace ddpdeid::zip
