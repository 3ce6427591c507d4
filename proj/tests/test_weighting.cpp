#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tagfolk/weighting.hpp"
#include "test_support.hpp"

using namespace tagfolk;
using tagfolk::testing::brute_force;
using tagfolk::testing::build;
using tagfolk::testing::random_bookmarks;

TEST_CASE("inverse frequency") {
  CHECK(inverse_frequency(500, 500) == 0.0);
  CHECK(inverse_frequency(1, 1) == 0.0);
  CHECK(inverse_frequency(10, 1000) == doctest::Approx(4.605170185988091));
  CHECK(inverse_frequency(1, 2) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(inverse_frequency(0, 10), std::domain_error);
  CHECK_THROWS_AS(inverse_frequency(11, 10), std::domain_error);
  for (Count n = 1; n < 50; ++n) CHECK(inverse_frequency(n + 1, 50) < inverse_frequency(n, 50));
}

TEST_CASE("TF without normalization is the raw bookmark count") {
  const auto f = tagfolk::testing::worked_example();
  const auto r = *f.find_resource("r1");
  const auto v = vectorize(f, r, Scheme::TF, false);
  CHECK(v.entries.size() == static_cast<Eigen::Index>(f.n_tags()));
  CHECK(v.entries.nonZeros() == 5);
  CHECK(v.entries.coeff(f.find_tag("paper")->index()) == 2.0);
  CHECK(v.entries.coeff(f.find_tag("social-tagging")->index()) == 2.0);
  CHECK(v.entries.coeff(f.find_tag("research")->index()) == 1.0);
  for (const auto& [t, c] : f.resource_tags(r)) CHECK(v.entries.coeff(t.index()) == double(c));
}

TEST_CASE("a tag on every resource vanishes under TF-IRF") {
  const auto f = tagfolk::testing::worked_example();
  const auto v = vectorize(f, *f.find_resource("r1"), Scheme::TF_IRF);
  CHECK(v.entries.nonZeros() == 0);

  Folksonomy g;
  g.add_bookmark("u1", "r1", {"common", "rare"});
  g.add_bookmark("u1", "r2", {"common"});
  const auto w = vectorize(g, *g.find_resource("r1"), Scheme::TF_IRF);
  CHECK(w.entries.nonZeros() == 1);
  CHECK(w.entries.coeff(g.find_tag("rare")->index()) == doctest::Approx(1.0));
  CHECK(w.entries.coeff(g.find_tag("common")->index()) == 0.0);
}

TEST_CASE("vectors match a brute-force recomputation for every scheme") {
  auto g = rng::make_engine({11});
  for (int trial = 0; trial < 15; ++trial) {
    const auto bms = random_bookmarks(g, 70, 9, 12, 30, 5);
    const auto f = build(bms);
    const auto oracle = brute_force(bms);
    const double n_r = double(oracle.resources.size());
    const double n_u = double(oracle.users.size());
    const double n_b = double(bms.size());
    for (Scheme s : kAllSchemes) {
      for (const auto& res : oracle.resources) {
        std::map<std::string, double> expected;
        double norm2 = 0;
        for (const auto& [key, tf] : oracle.tf) {
          if (key.second != res) continue;
          const auto& tag = key.first;
          double idf = 1.0;
          if (s == Scheme::TF_IRF) idf = std::log(n_r / double(oracle.resources_of_tag.at(tag).size()));
          if (s == Scheme::TF_IUF) idf = std::log(n_u / double(oracle.users_of_tag.at(tag).size()));
          if (s == Scheme::TF_IBF) idf = std::log(n_b / double(oracle.bookmarks_of_tag.at(tag)));
          const double w = double(tf) * idf;
          if (w != 0.0) expected[tag] = w;
          norm2 += w * w;
        }
        const auto v = vectorize(f, *f.find_resource(res), s);
        CHECK(v.scheme == s);
        CHECK(v.entries.nonZeros() == static_cast<Eigen::Index>(expected.size()));
        for (const auto& [tag, w] : expected) {
          CHECK(v.entries.coeff(f.find_tag(tag)->index()) == doctest::Approx(w / std::sqrt(norm2)).epsilon(1e-12));
        }
        if (!expected.empty()) CHECK(std::abs(v.entries.norm() - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("property: IRF weights are positive whenever the tag misses some resource") {
  auto g = rng::make_engine({12});
  const auto f = build(random_bookmarks(g, 200, 20, 30, 40, 4));
  for (std::size_t r = 0; r < f.n_resources(); ++r) {
    const ResourceId rid{static_cast<std::uint32_t>(r)};
    const auto v = vectorize(f, rid, Scheme::TF_IRF, false);
    for (const auto& [t, c] : f.resource_tags(rid)) {
      if (f.frequencies(t).rf < f.n_resources()) CHECK(v.entries.coeff(t.index()) > 0.0);
    }
  }
}

TEST_CASE("unknown resource") {
  const auto f = tagfolk::testing::worked_example();
  CHECK_THROWS_AS(vectorize(f, ResourceId{7}, Scheme::TF), std::out_of_range);
}

TEST_CASE("vectorize_all keeps the order of the request") {
  Folksonomy g;
  g.add_bookmark("u", "a", {"x"});
  g.add_bookmark("u", "b", {"y"});
  const std::vector<ResourceId> ids{*g.find_resource("b"), *g.find_resource("a")};
  const auto vs = vectorize_all(g, ids, Scheme::TF_IUF);
  REQUIRE(vs.size() == 2);
  CHECK(vs[0].resource == ids[0]);
  CHECK(vs[1].resource == ids[1]);
}

TEST_CASE("scheme names") {
  CHECK(to_string(Scheme::TF_IBF) == "TF-IBF");
  CHECK(parse_scheme("tf-irf") == Scheme::TF_IRF);
  CHECK(parse_scheme("TF") == Scheme::TF);
  CHECK_THROWS_AS(parse_scheme("tf-idf"), std::invalid_argument);
  CHECK(parse_schemes("TF,tf-iuf") == std::vector<Scheme>{Scheme::TF, Scheme::TF_IUF});
  CHECK_THROWS_AS(parse_schemes(""), std::invalid_argument);
}

TEST_CASE("vector dump format") {
  const auto f = tagfolk::testing::worked_example();
  std::ostringstream out;
  write_vector(out, f, vectorize(f, *f.find_resource("r1"), Scheme::TF, false));
  CHECK(out.str() ==
        "r1 social-tagging:2.000000 research:1.000000 paper:2.000000 classification:1.000000 "
        "social-bookmarking:1.000000\n");
}
