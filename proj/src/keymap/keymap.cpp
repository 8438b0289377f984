#include "keymap/keymap.hpp"

#include <sodium.h>

#include <stdexcept>

#include "common/errors.hpp"
#include "common/text.hpp"

namespace ddpdeid {
namespace {

void ensure_sodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw InvariantError("libsodium failed to initialize");
}

int category_rank(Category c) {
  // Higher rank wins when one value is seen under several user categories.
  return c == Category::DdpId ? 1 : 0;
}

}  // namespace

KeyClass key_class_of(Category c) {
  switch (c) {
    case Category::Username:
    case Category::DdpId: return KeyClass::User;
    case Category::Name: return KeyClass::Name;
    case Category::Email: return KeyClass::Email;
    case Category::Phone: return KeyClass::Phone;
    case Category::Url: return KeyClass::Url;
  }
  return KeyClass::User;
}

std::string_view to_string(KeyClass k) {
  switch (k) {
    case KeyClass::User: return "user";
    case KeyClass::Name: return "name";
    case KeyClass::Email: return "email";
    case KeyClass::Phone: return "phone";
    case KeyClass::Url: return "url";
  }
  return "user";
}

Salt Salt::random() {
  ensure_sodium();
  std::vector<std::uint8_t> bytes(32);
  randombytes_buf(bytes.data(), bytes.size());
  return Salt(std::move(bytes));
}

Salt Salt::from_hex(std::string_view hex) {
  auto bytes = ddpdeid::from_hex(trim(hex));
  if (!bytes || bytes->empty()) throw InputError("salt must be a non-empty even-length hex string");
  return Salt(std::move(*bytes));
}

std::string Salt::hex() const { return to_hex(bytes_); }

std::vector<ParticipantRow> parse_participants(std::string_view csv) {
  std::vector<ParticipantRow> rows;
  std::set<std::string> ids;
  std::set<std::string> users;
  bool header_seen = false;
  std::size_t line_no = 0;
  for (const std::string& raw_line : split(csv, '\n')) {
    ++line_no;
    const std::string_view line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_csv_line(line);
    for (std::string& f : fields) f = std::string(trim(f));
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != 3 || ascii_lower(fields[0]) != "username" ||
          ascii_lower(fields[1]) != "name" || ascii_lower(fields[2]) != "participant_id") {
        throw InputError("participant file header must be 'username,name,participant_id'");
      }
      continue;
    }
    if (fields.size() != 3) {
      throw InputError("participant file line " + std::to_string(line_no) + ": expected 3 fields");
    }
    ParticipantRow row{fields[0], fields[1], fields[2]};
    if (!is_username_like(row.username)) {
      throw InputError("participant file line " + std::to_string(line_no) +
                       ": not a valid username '" + row.username + "'");
    }
    if (row.participant_id.empty() || row.participant_id.find_first_of(" \t") != std::string::npos ||
        is_hashed_code(row.participant_id) || is_fixed_code(row.participant_id)) {
      throw InputError("participant file line " + std::to_string(line_no) +
                       ": invalid participant id '" + row.participant_id + "'");
    }
    if (!ids.insert(row.participant_id).second) {
      throw InputError("duplicate participant id '" + row.participant_id + "'");
    }
    if (!users.insert(ascii_lower(row.username)).second) {
      throw InputError("participant '" + row.username + "' listed twice");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ParticipantRow> load_participants(const std::filesystem::path& path) {
  return parse_participants(read_file(path));
}

KeyMap::KeyMap(Salt salt) : salt_(std::move(salt)) {
  if (salt_.bytes().empty()) throw InputError("empty salt");
}

std::string KeyMap::canonical(Category c, std::string_view value) {
  switch (key_class_of(c)) {
    case KeyClass::User:
    case KeyClass::Name:
    case KeyClass::Email:
    case KeyClass::Url: return ascii_lower(trim(value));
    case KeyClass::Phone: return std::string(trim(value));
  }
  return std::string(value);
}

void KeyMap::add_participants(std::span<const ParticipantRow> rows) {
  for (const ParticipantRow& row : rows) {
    participant_ids_.insert(row.participant_id);
    const CanonicalKey user{KeyClass::User, canonical(Category::Username, row.username)};
    participant_codes_[user] = row.participant_id;
    entries_[user] = KeyEntry{Category::Username, row.participant_id};
    if (!row.name.empty()) {
      const CanonicalKey name{KeyClass::Name, canonical(Category::Name, row.name)};
      participant_codes_[name] = row.participant_id;
      entries_[name] = KeyEntry{Category::Name, row.participant_id};
    }
  }
}

std::optional<std::string> KeyMap::participant_code(KeyClass cls,
                                                    std::string_view canonical_value) const {
  auto it = participant_codes_.find(CanonicalKey{cls, std::string(canonical_value)});
  if (it == participant_codes_.end()) return std::nullopt;
  return it->second;
}

std::string KeyMap::hashed_code(KeyClass cls, std::string_view canonical_value) const {
  ensure_sodium();
  crypto_auth_hmacsha256_state state;
  crypto_auth_hmacsha256_init(&state, salt_.bytes().data(), salt_.bytes().size());
  const std::string_view domain = to_string(cls);
  crypto_auth_hmacsha256_update(&state, reinterpret_cast<const unsigned char*>(domain.data()),
                                domain.size());
  const unsigned char sep = 0x1f;
  crypto_auth_hmacsha256_update(&state, &sep, 1);
  crypto_auth_hmacsha256_update(&state,
                                reinterpret_cast<const unsigned char*>(canonical_value.data()),
                                canonical_value.size());
  std::uint8_t digest[crypto_auth_hmacsha256_BYTES];
  crypto_auth_hmacsha256_final(&state, digest);
  return "__" + to_hex(std::span<const std::uint8_t>(digest, 8));
}

void KeyMap::upgrade_category(KeyEntry& entry, Category category) const {
  if (key_class_of(entry.category) == KeyClass::User &&
      category_rank(category) > category_rank(entry.category)) {
    entry.category = category;
  }
}

const std::string& KeyMap::put_hashed(const CanonicalKey& key, Category category) {
  std::string code = hashed_code(key.cls, key.value);
  auto [owner, fresh] = hashed_owner_.try_emplace(code, key);
  if (!fresh && owner->second != key) {
    throw InvariantError("code collision between '" + owner->second.value + "' and '" + key.value +
                         "'; rerun with a different --salt");
  }
  auto [it, inserted] = entries_.try_emplace(key, KeyEntry{category, std::move(code)});
  return it->second.code;
}

std::string KeyMap::assign(const PiiMatch& match) {
  const KeyClass cls = key_class_of(match.category);
  CanonicalKey key{cls, canonical(match.category, match.value)};
  if (key.value.empty()) throw InvariantError("empty PII value from " + match.source);

  switch (cls) {
    case KeyClass::Email:
    case KeyClass::Phone:
    case KeyClass::Url: {
      const std::string_view fixed = cls == KeyClass::Email   ? kEmailCode
                                     : cls == KeyClass::Phone ? kPhoneCode
                                                              : kUrlCode;
      entries_.try_emplace(key, KeyEntry{match.category, std::string(fixed)});
      return std::string(fixed);
    }
    case KeyClass::User:
    case KeyClass::Name: break;
  }

  if (auto pid = participant_code(cls, key.value)) {
    auto [it, inserted] = entries_.try_emplace(key, KeyEntry{match.category, *pid});
    upgrade_category(it->second, match.category);
    return *pid;
  }

  if (match.rule == Rule::ProfileName && !match.alias.empty()) {
    const std::string user_code =
        assign(PiiMatch{match.alias, Category::Username, match.source, Rule::LabelValue, {}});
    auto it = entries_.find(key);
    if (it != entries_.end() && !aliased_.contains(key)) {
      hashed_owner_.erase(it->second.code);
      it->second.code = user_code;
    } else if (it == entries_.end()) {
      entries_.emplace(key, KeyEntry{Category::Name, user_code});
    }
    aliased_.insert(key);
    return entries_.at(key).code;
  }

  if (auto it = entries_.find(key); it != entries_.end()) {
    upgrade_category(it->second, match.category);
    return it->second.code;
  }
  return put_hashed(key, match.category);
}

const KeyEntry* KeyMap::find(KeyClass cls, std::string_view canonical_value) const {
  auto it = entries_.find(CanonicalKey{cls, std::string(canonical_value)});
  return it == entries_.end() ? nullptr : &it->second;
}

KeyMap KeyMap::restore(std::map<CanonicalKey, KeyEntry> entries, std::optional<Salt> salt) {
  KeyMap map(salt ? std::move(*salt) : Salt::random());
  map.entries_ = std::move(entries);
  return map;
}

namespace {

std::string escape_field(std::string_view s) {
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

std::string unescape_field(std::string_view s) {
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

}  // namespace

std::string format_keys(const KeyMap& map, const KeyFileOptions& options) {
  std::string out = "# ddpdeid key file\n";
  out += std::string("# cap_sensitive: ") + (options.cap_sensitive ? "true" : "false") + "\n";
  if (options.store_salt) out += "# salt: " + map.salt().hex() + "\n";
  out += "category\toriginal\tcode\n";
  for (const auto& [key, entry] : map.entries()) {
    out += std::string(to_string(entry.category));
    out += '\t';
    out += escape_field(key.value);
    out += '\t';
    out += entry.code;
    out += '\n';
  }
  return out;
}

void save_keys(const KeyMap& map, const std::filesystem::path& path,
               const KeyFileOptions& options) {
  write_file(path, format_keys(map, options));
}

LoadedKeys parse_keys(std::string_view text) {
  std::map<CanonicalKey, KeyEntry> entries;
  std::optional<Salt> salt;
  bool cap_sensitive = false;
  bool header_seen = false;
  std::size_t line_no = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = trim(line.substr(1));
      const std::size_t colon = body.find(':');
      if (colon == std::string_view::npos) continue;
      const std::string key = ascii_lower(trim(body.substr(0, colon)));
      const std::string_view value = trim(body.substr(colon + 1));
      if (key == "salt") salt = Salt::from_hex(value);
      if (key == "cap_sensitive") cap_sensitive = value == "true" || value == "1";
      continue;
    }
    const auto fields = split(line, '\t');
    if (!header_seen) {
      if (fields.size() != 3 || fields[0] != "category" || fields[1] != "original" ||
          fields[2] != "code") {
        throw InputError("key file: missing 'category\\toriginal\\tcode' header");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) {
      throw InputError("key file line " + std::to_string(line_no) + ": expected 3 fields");
    }
    const auto category = parse_category(fields[0]);
    if (!category) {
      throw InputError("key file line " + std::to_string(line_no) + ": unknown category '" +
                       fields[0] + "'");
    }
    if (fields[2].empty() || fields[1].empty()) {
      throw InputError("key file line " + std::to_string(line_no) + ": empty field");
    }
    CanonicalKey key{key_class_of(*category), unescape_field(fields[1])};
    if (!entries.emplace(key, KeyEntry{*category, fields[2]}).second) {
      throw InputError("key file line " + std::to_string(line_no) + ": duplicate key '" +
                       key.value + "'");
    }
  }
  if (!header_seen) throw InputError("key file: missing header");
  return LoadedKeys{KeyMap::restore(std::move(entries), std::move(salt)), cap_sensitive};
}

LoadedKeys load_keys(const std::filesystem::path& path) { return parse_keys(read_file(path)); }

}  // namespace ddpdeid
