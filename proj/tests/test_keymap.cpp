#include <doctest.h>

#include <algorithm>
#include <random>
#include <unordered_set>

#include "common/errors.hpp"
#include "keymap/keymap.hpp"
#include "support.hpp"

using namespace ddpdeid;

namespace {

const Salt kSalt = Salt::from_hex("00112233445566778899aabbccddeeff");

PiiMatch user(std::string v) { return {std::move(v), Category::Username, "f.json", Rule::LabelValue, {}}; }
PiiMatch name(std::string v) { return {std::move(v), Category::Name, "f.json", Rule::NameList, {}}; }

}  // namespace

TEST_SUITE("keymap") {
  TEST_CASE("usernames are case-insensitive") {
    KeyMap map(kSalt);
    const std::string a = map.assign(user("JDoe_99"));
    CHECK(a == map.assign(user("jdoe_99")));
    CHECK(is_hashed_code(a));
    CHECK(map.entries().size() == 1);
  }

  TEST_CASE("participant ids win") {
    KeyMap map(kSalt);
    const std::vector<ParticipantRow> rows{{"jdoe_99", "Jane", "PP01"}};
    map.add_participants(rows);
    CHECK(map.assign(user("jdoe_99")) == "PP01");
    CHECK(map.assign(user("JDOE_99")) == "PP01");
    CHECK(map.assign(name("jane")) == "PP01");
    CHECK(map.participant_ids().contains("PP01"));
  }

  TEST_CASE("fixed codes") {
    KeyMap map(kSalt);
    CHECK(map.assign({"j@x.com", Category::Email, "p", Rule::LabelValue, {}}) == "__emailaddress");
    CHECK(map.assign({"+31612345678", Category::Phone, "p", Rule::LabelValue, {}}) == "__phonenumber");
    CHECK(map.assign({"https://instagram.com/x", Category::Url, "p", Rule::LabelValue, {}}) == "__url");
  }

  TEST_CASE("code derivation is a keyed hash of class and value") {
    KeyMap a(kSalt);
    KeyMap b(Salt::from_hex("ff"));
    CHECK(a.assign(user("rose_1")) != b.assign(user("rose_1")));
    // same spelling, different class, different code
    KeyMap c(kSalt);
    CHECK(c.assign(user("rose")) != c.assign(name("rose")));
    CHECK(a.hashed_code(KeyClass::User, "rose_1") == a.assign(user("ROSE_1")));
  }

  TEST_CASE("profile name shares the username code") {
    KeyMap map(kSalt);
    const std::string owner = map.assign({"jdoe_99", Category::DdpId, "profile.json", Rule::LabelValue, {}});
    const std::string full =
        map.assign({"Jane Doe", Category::Name, "profile.json", Rule::ProfileName, "jdoe_99"});
    CHECK(owner == full);
    // a later name-list hit on the same value keeps the alias
    CHECK(map.assign(name("jane doe")) == owner);
    CHECK(map.find(KeyClass::User, "jdoe_99")->category == Category::DdpId);
  }

  TEST_CASE("alias replaces an earlier hashed name code") {
    KeyMap map(kSalt);
    const std::string hashed = map.assign(name("Jane"));
    const std::string aliased =
        map.assign({"Jane", Category::Name, "profile.json", Rule::ProfileName, "jdoe_99"});
    CHECK(hashed != aliased);
    CHECK(map.assign(name("JANE")) == aliased);
    CHECK(map.assign(user("jdoe_99")) == aliased);
  }

  TEST_CASE("ddp id outranks username regardless of order") {
    KeyMap a(kSalt), b(kSalt);
    a.assign(user("jdoe_99"));
    a.assign({"jdoe_99", Category::DdpId, "p", Rule::LabelValue, {}});
    b.assign({"jdoe_99", Category::DdpId, "p", Rule::LabelValue, {}});
    b.assign(user("jdoe_99"));
    CHECK(a == b);
    CHECK(a.find(KeyClass::User, "jdoe_99")->category == Category::DdpId);
  }

  TEST_CASE("determinism under arrival order") {
    std::mt19937 rng(99);
    std::vector<PiiMatch> matches;
    for (int i = 0; i < 300; ++i) {
      const std::string v = testing::random_string(rng, testing::kUsernameAlphabet, 3, 12);
      switch (i % 5) {
        case 0: matches.push_back(user(v)); break;
        case 1: matches.push_back(name(v)); break;
        case 2: matches.push_back({v, Category::DdpId, "p", Rule::LabelValue, {}}); break;
        case 3: matches.push_back({v + "@x.org", Category::Email, "p", Rule::LabelValue, {}}); break;
        default: matches.push_back({v + " " + v, Category::Name, "p", Rule::ProfileName, ascii_lower(matches[0].value)});
      }
    }
    KeyMap reference(kSalt);
    for (const auto& m : matches) reference.assign(m);
    for (int round = 0; round < 20; ++round) {
      std::shuffle(matches.begin(), matches.end(), rng);
      KeyMap map(kSalt);
      for (const auto& m : matches) map.assign(m);
      CHECK(map == reference);
    }
  }

  TEST_CASE("codes are injective over 100000 random usernames") {
    std::mt19937 rng(4242);
    KeyMap map(Salt::random());
    std::unordered_set<std::string> values, codes;
    while (values.size() < 100000) {
      std::string v = ascii_lower(testing::random_string(rng, testing::kUsernameAlphabet, 3, 30));
      if (!values.insert(v).second) continue;
      codes.insert(map.assign(user(v)));
    }
    CHECK(codes.size() == values.size());
  }

  TEST_CASE("participants file") {
    CHECK(parse_participants("username,name,participant_id\njdoe_99,Jane,PP01\nmary.k,,PP02\n").size() == 2);
    CHECK(parse_participants("Username, Name, Participant_ID\r\njdoe_99,\"Doe, Jane\",PP01\r\n")[0].name == "Doe, Jane");
    CHECK_THROWS_AS(parse_participants("user,pid\njdoe,1\n"), InputError);
    CHECK_THROWS_AS(parse_participants("username,name,participant_id\njdoe_99,,PP01\nmary,,PP01\n"), InputError);
    CHECK_THROWS_AS(parse_participants("username,name,participant_id\nj d,,PP01\n"), InputError);
    CHECK_THROWS_AS(parse_participants("username,name,participant_id\njdoe,,__url\n"), InputError);
    CHECK_THROWS_AS(parse_participants("username,name,participant_id\njdoe,,\n"), InputError);
  }

  TEST_CASE("key file round-trip") {
    KeyMap map(kSalt);
    map.assign(user("jdoe_99"));
    map.assign(name("Tab\there"));
    testing::TempDir dir;
    save_keys(map, dir / "keys.tsv");
    const std::string text = testing::get(dir / "keys.tsv");
    CHECK(text.find("category\toriginal\tcode\n") != std::string::npos);
    CHECK(text.find("# salt") == std::string::npos);
    const LoadedKeys loaded = load_keys(dir / "keys.tsv");
    CHECK(loaded.map == map);
    CHECK(loaded.map.entries().size() == 2);
    CHECK_FALSE(loaded.cap_sensitive);
  }

  TEST_CASE("key file carries salt and settings when asked") {
    KeyMap map(kSalt);
    map.assign(user("jdoe_99"));
    const LoadedKeys loaded = parse_keys(format_keys(map, {true, true}));
    CHECK(loaded.cap_sensitive);
    CHECK(loaded.map.salt() == kSalt);
    CHECK(loaded.map.hashed_code(KeyClass::User, "jdoe_99") == map.find(KeyClass::User, "jdoe_99")->code);
  }

  TEST_CASE("corrupt key files are rejected") {
    CHECK_THROWS_AS(parse_keys("username\tjdoe\t__0123456789abcdef\n"), InputError);
    CHECK_THROWS_AS(parse_keys("category\toriginal\tcode\nusername\tjdoe\n"), InputError);
    CHECK_THROWS_AS(parse_keys("category\toriginal\tcode\nplanet\tjdoe\tx\n"), InputError);
    CHECK_THROWS_AS(
        parse_keys("category\toriginal\tcode\nusername\tjdoe\t__0123456789abcdef\nddp_id\tjdoe\t__0123456789abcdef\n"),
        InputError);
    CHECK_THROWS_AS(load_keys("/nonexistent/keys.tsv"), InputError);
    CHECK_THROWS_AS(Salt::from_hex("xyz"), InputError);
  }
}
