#include <doctest.h>

#include <atomic>
#include <stdexcept>

#include "common/category.hpp"
#include "common/errors.hpp"
#include "common/parallel.hpp"
#include "common/text.hpp"
#include "common/words.hpp"
#include "support.hpp"

using namespace ddpdeid;

TEST_SUITE("common") {
  TEST_CASE("category names round-trip") {
    for (Category c : kAllCategories) CHECK(parse_category(to_string(c)) == c);
    CHECK_FALSE(parse_category("address").has_value());
  }

  TEST_CASE("code forms") {
    CHECK(is_hashed_code("__0123456789abcdef"));
    CHECK_FALSE(is_hashed_code("__0123456789ABCDEF"));
    CHECK_FALSE(is_hashed_code("__0123456789abcde"));
    CHECK_FALSE(is_hashed_code("_x0123456789abcdef"));
    CHECK(is_fixed_code("__emailaddress"));
    CHECK(is_fixed_code("__phonenumber"));
    CHECK(is_fixed_code("__url"));
    CHECK_FALSE(is_fixed_code("__name"));
  }

  TEST_CASE("hex round-trip") {
    const std::vector<std::uint8_t> bytes{0x00, 0x7f, 0xff, 0x10};
    CHECK(to_hex(bytes) == "007fff10");
    CHECK(from_hex("007FFF10") == bytes);
    CHECK_FALSE(from_hex("abc").has_value());
    CHECK_FALSE(from_hex("zz").has_value());
  }

  TEST_CASE("csv splitting handles quotes") {
    CHECK(split_csv_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(split_csv_line(R"("a,b","say ""hi""",)") ==
          std::vector<std::string>{"a,b", R"(say "hi")", ""});
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
  }

  TEST_CASE("list files skip comments and blanks") {
    testing::TempDir dir;
    testing::put(dir / "l.txt", "# header\nalpha\r\n\n  beta  \n#gamma\n");
    CHECK(load_list_file(dir / "l.txt") == std::vector<std::string>{"alpha", "beta"});
    CHECK_THROWS_AS(load_list_file(dir / "missing.txt"), InputError);
  }

  TEST_CASE("word boundaries") {
    CHECK(starts_word("a b", 2));
    CHECK_FALSE(starts_word("ab", 1));
    CHECK(ends_word("Jan. komt", 3));
    CHECK(ends_word("Jan...", 3));
    CHECK_FALSE(ends_word("jan.doe", 3));
    std::vector<std::string> words;
    for_each_word("Hi jdoe_99. see x.y", [&](std::size_t b, std::size_t e) {
      words.emplace_back(std::string_view("Hi jdoe_99. see x.y").substr(b, e - b));
    });
    CHECK(words == std::vector<std::string>{"Hi", "jdoe_99", "see", "x.y"});
  }

  TEST_CASE("parallel_for covers every index once and rethrows") {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(50, [](std::size_t i) {
                      if (i == 17) throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
  }
}
