#include <doctest.h>

#include "tagfolk/folksonomy.hpp"
#include "tagfolk/normalize.hpp"
#include "test_support.hpp"

using namespace tagfolk;
using tagfolk::testing::brute_force;
using tagfolk::testing::build;
using tagfolk::testing::random_bookmarks;

TEST_CASE("worked example produces the weighted union of both bookmarks") {
  const auto f = tagfolk::testing::worked_example();
  const auto r1 = *f.find_resource("r1");
  std::map<std::string, Count> got;
  for (const auto& [tag, count] : f.resource_tags(r1)) got[f.tag_name(tag)] = count;
  const std::map<std::string, Count> expected{
      {"social-tagging", 2}, {"paper", 2}, {"social-bookmarking", 1}, {"classification", 1}, {"research", 1}};
  CHECK(got == expected);

  CHECK(f.tf("social-tagging", "r1") == 2);
  CHECK(f.tf("unknown-tag", "r1") == 0);
  CHECK(f.frequencies("paper") == Frequencies{1, 2, 2});
  CHECK(f.frequencies("nope") == Frequencies{0, 0, 0});
  CHECK(f.n_users() == 2);
  CHECK(f.n_resources() == 1);
  CHECK(f.n_bookmarks() == 2);
  CHECK(f.bookmarks()[1].seq == 1);
}

TEST_CASE("singleton bookmark") {
  Folksonomy f;
  const auto idx = f.add_bookmark("u1", "r1", {"a"});
  CHECK(idx == 0);
  CHECK(f.bookmarks()[0].seq == 0);
  CHECK(f.frequencies("a") == Frequencies{1, 1, 1});
}

TEST_CASE("empty tag set is rejected and leaves the store untouched") {
  Folksonomy f;
  CHECK_THROWS_AS(f.add_bookmark("u1", "r1", {}), NonAnnotatedBookmark);
  CHECK_THROWS_AS(f.add_bookmark("u1", "r1", {"  ", ""}), NonAnnotatedBookmark);
  CHECK(f.empty());
  CHECK(f.n_users() == 0);
  CHECK(f.n_resources() == 0);
  CHECK_THROWS_AS(f.add_bookmark("", "r1", {"a"}), std::invalid_argument);
}

TEST_CASE("tags are normalized and deduplicated within a bookmark") {
  Folksonomy f;
  f.add_bookmark("u1", "r1", {"Paper", " paper ", "PAPER", "Été"});
  CHECK(f.bookmarks()[0].tags.size() == 2);
  CHECK(f.tf("paper", "r1") == 1);
  CHECK(f.find_tag("ÉTÉ").has_value());
  CHECK(f.tag_name(*f.find_tag("été")) == "été");
}

TEST_CASE("normalize_tag") {
  CHECK(normalize_tag("  Social-Tagging\t") == "social-tagging");
  CHECK(normalize_tag("ΣΟΦΙΑ") == "σοφια");
  CHECK(normalize_tag("Ciencia Ficción") == "ciencia ficción");
  CHECK(normalize_tag("\xC2\xA0nbsp\xC2\xA0") == "nbsp");
  CHECK(normalize_tag("   ").empty());
  // Invalid UTF-8 is passed through byte for byte.
  CHECK(normalize_tag("A\xFF") == "a\xFF");
}

TEST_CASE("interning is injective and stable") {
  Interner<TagId> in;
  const auto a = in.intern("a");
  const auto b = in.intern("b");
  CHECK(a != b);
  CHECK(in.intern("a") == a);
  CHECK(in.name(b) == "b");
  CHECK(!in.find("c"));
}

TEST_CASE("five users with two overlapping bookmarks each match a brute-force recount") {
  std::vector<tagfolk::testing::PlainBookmark> bms;
  for (int u = 0; u < 5; ++u) {
    bms.push_back({"u" + std::to_string(u), "r" + std::to_string(u % 3), {"common", "t" + std::to_string(u % 2)}});
    bms.push_back({"u" + std::to_string(u), "r" + std::to_string((u + 1) % 3), {"common", "x" + std::to_string(u)}});
  }
  const auto f = build(bms);
  const auto oracle = brute_force(bms);
  for (const auto& [tag, resources] : oracle.resources_of_tag) {
    CHECK(f.frequencies(tag) == Frequencies{resources.size(), oracle.users_of_tag.at(tag).size(), oracle.bookmarks_of_tag.at(tag)});
  }
}

TEST_CASE("property: incremental indices equal a recount after every prefix") {
  auto g = rng::make_engine({7});
  for (int trial = 0; trial < 40; ++trial) {
    const auto bms = random_bookmarks(g, 1 + rng::uniform_index(g, 40), 6, 5, 12, 4);
    Folksonomy f;
    std::vector<tagfolk::testing::PlainBookmark> prefix;
    for (const auto& b : bms) {
      f.add_bookmark(b.user, b.resource, std::vector<std::string>(b.tags.begin(), b.tags.end()));
      prefix.push_back(b);
      const auto oracle = brute_force(prefix);
      REQUIRE(f.n_users() == oracle.users.size());
      REQUIRE(f.n_resources() == oracle.resources.size());
      REQUIRE(f.n_tags() == oracle.bookmarks_of_tag.size());
      for (const auto& [tag, bf] : oracle.bookmarks_of_tag) {
        const auto fr = f.frequencies(tag);
        REQUIRE(fr == Frequencies{oracle.resources_of_tag.at(tag).size(), oracle.users_of_tag.at(tag).size(), bf});
        REQUIRE(fr.bf >= fr.uf);
        REQUIRE(fr.bf >= fr.rf);
      }
      for (const auto& [key, count] : oracle.tf) REQUIRE(f.tf(key.first, key.second) == count);
    }
  }
}

TEST_CASE("property: tf bounds and resource coverage") {
  auto g = rng::make_engine({11});
  const auto bms = random_bookmarks(g, 200, 20, 15, 30, 5);
  const auto f = build(bms);
  for (std::size_t t = 0; t < f.n_tags(); ++t) {
    const TagId tag{static_cast<std::uint32_t>(t)};
    Count covered = 0;
    for (std::size_t r = 0; r < f.n_resources(); ++r) {
      const ResourceId rid{static_cast<std::uint32_t>(r)};
      const auto tf = f.tf(tag, rid);
      CHECK(tf <= f.frequencies(tag).bf);
      CHECK(tf <= f.bookmarks_of(rid).size());
      covered += tf > 0;
    }
    CHECK(covered == f.frequencies(tag).rf);
  }
  // Per-resource totals equal the number of tag assignments in its bookmarks.
  for (std::size_t r = 0; r < f.n_resources(); ++r) {
    const ResourceId rid{static_cast<std::uint32_t>(r)};
    Count from_index = 0, from_bookmarks = 0;
    for (const auto& [tag, c] : f.resource_tags(rid)) from_index += c;
    for (auto b : f.bookmarks_of(rid)) from_bookmarks += f.bookmarks()[b].tags.size();
    CHECK(from_index == from_bookmarks);
  }
}

TEST_CASE("seq follows insertion order per resource") {
  Folksonomy f;
  f.add_bookmark("u1", "r1", {"a"});
  f.add_bookmark("u1", "r2", {"a"});
  f.add_bookmark("u2", "r1", {"b"});
  CHECK(f.bookmarks()[2].seq == 1);
  CHECK(f.bookmarks()[1].seq == 0);
  const auto r1 = f.bookmarks_of(*f.find_resource("r1"));
  CHECK(std::vector<std::size_t>(r1.begin(), r1.end()) == std::vector<std::size_t>{0, 2});
}
