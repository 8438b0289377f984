#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "common/category.hpp"
#include "extract/match.hpp"

namespace ddpdeid {

// Hash domain of a key. Username, DdpId and profile display names share the
// User domain through aliasing; first names hash in their own domain so a
// name and an unrelated username with the same spelling stay distinct.
enum class KeyClass { User, Name, Email, Phone, Url };

KeyClass key_class_of(Category c);
std::string_view to_string(KeyClass k);

struct CanonicalKey {
  KeyClass cls = KeyClass::User;
  std::string value;

  auto operator<=>(const CanonicalKey&) const = default;
  bool operator==(const CanonicalKey&) const = default;
};

struct KeyEntry {
  Category category = Category::Username;
  std::string code;

  bool operator==(const KeyEntry&) const = default;
};

class Salt {
 public:
  Salt() = default;
  explicit Salt(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}
  static Salt random();
  // Throws InputError unless the text is non-empty hex.
  static Salt from_hex(std::string_view hex);

  std::span<const std::uint8_t> bytes() const { return bytes_; }
  std::string hex() const;
  bool operator==(const Salt&) const = default;

 private:
  std::vector<std::uint8_t> bytes_;
};

struct ParticipantRow {
  std::string username;
  std::string name;  // optional
  std::string participant_id;
};

std::vector<ParticipantRow> parse_participants(std::string_view csv);
std::vector<ParticipantRow> load_participants(const std::filesystem::path& path);

class KeyMap {
 public:
  explicit KeyMap(Salt salt = Salt::random());

  static std::string canonical(Category c, std::string_view value);

  // Participant usernames and names are entered up front and always map to
  // their participant id.
  void add_participants(std::span<const ParticipantRow> rows);

  // Returns the replacement code for a match, inserting it on first sight.
  // Throws InvariantError when two distinct values hash to the same code.
  std::string assign(const PiiMatch& match);

  // keyed hash -> "__" + 16 hex digits
  std::string hashed_code(KeyClass cls, std::string_view canonical_value) const;

  const std::map<CanonicalKey, KeyEntry>& entries() const { return entries_; }
  const KeyEntry* find(KeyClass cls, std::string_view canonical_value) const;
  const Salt& salt() const { return salt_; }
  const std::set<std::string>& participant_ids() const { return participant_ids_; }
  std::optional<std::string> participant_code(KeyClass cls, std::string_view canonical_value) const;

  // Rebuilds a map from a key file; the salt is unknown unless it was stored.
  static KeyMap restore(std::map<CanonicalKey, KeyEntry> entries, std::optional<Salt> salt);

  // Entry equality; the salt is not part of a map's identity.
  bool operator==(const KeyMap& other) const { return entries_ == other.entries_; }

 private:
  const std::string& put_hashed(const CanonicalKey& key, Category category);
  void upgrade_category(KeyEntry& entry, Category category) const;

  Salt salt_;
  std::map<CanonicalKey, KeyEntry> entries_;
  std::unordered_map<std::string, CanonicalKey> hashed_owner_;
  std::set<CanonicalKey> aliased_;
  std::map<CanonicalKey, std::string> participant_codes_;
  std::set<std::string> participant_ids_;
};

struct KeyFileOptions {
  bool store_salt = false;
  bool cap_sensitive = false;
};

struct LoadedKeys {
  KeyMap map;
  bool cap_sensitive = false;
};

// Tab-separated `category\toriginal\tcode` with a header line. Settings the
// evaluator needs are carried in leading `# key: value` comments.
void save_keys(const KeyMap& map, const std::filesystem::path& path,
               const KeyFileOptions& options = {});
std::string format_keys(const KeyMap& map, const KeyFileOptions& options = {});
LoadedKeys load_keys(const std::filesystem::path& path);
LoadedKeys parse_keys(std::string_view text);

}  // namespace ddpdeid
