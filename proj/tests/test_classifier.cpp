#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tagfolk/classifier.hpp"
#include "test_support.hpp"

using namespace tagfolk;

namespace {

struct Synthetic {
  Folksonomy f;
  std::vector<std::pair<std::string, std::string>> pairs;
};

// Resource i belongs to category i % k and carries that category's signature
// tag plus `noise` random tags from a shared pool.
Synthetic synthetic(std::size_t n, std::size_t k, std::size_t noise, std::uint64_t seed) {
  Synthetic s;
  auto g = rng::make_engine({seed});
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = "r" + std::to_string(i);
    const auto c = "c" + std::to_string(i % k);
    std::vector<std::string> tags{"sig-" + c};
    for (std::size_t j = 0; j < noise; ++j) tags.push_back("noise" + std::to_string(rng::uniform_index(g, 40)));
    s.f.add_bookmark("u" + std::to_string(i), r, tags);
    s.pairs.emplace_back(r, c);
  }
  return s;
}

double training_accuracy(const Folksonomy& f, const LabeledSet& labels, Scheme scheme, const Hyperparameters& h = {}) {
  const auto ids = labels.resources();
  const auto vs = vectorize_all(f, ids, scheme);
  const auto model = train(vs, labels, h);
  std::size_t hits = 0;
  for (const auto& v : vs) hits += predict(model, v) == labels.labels.at(v.resource);
  return double(hits) / double(vs.size());
}

}  // namespace

TEST_CASE("two orthogonal classes are learned exactly") {
  Folksonomy f;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < 10; ++i) {
    f.add_bookmark("u", "a" + std::to_string(i), {"alpha"});
    f.add_bookmark("u", "b" + std::to_string(i), {"beta"});
    pairs.emplace_back("a" + std::to_string(i), "A");
    pairs.emplace_back("b" + std::to_string(i), "B");
  }
  const auto labels = make_labeled_set(f, pairs);
  CHECK(training_accuracy(f, labels, Scheme::TF) == 1.0);
}

TEST_CASE("ten classes with disjoint signatures are learned exactly") {
  const auto s = synthetic(200, 10, 2, 1);
  const auto labels = make_labeled_set(s.f, s.pairs);
  REQUIRE(labels.n_categories() == 10);
  for (Scheme scheme : kAllSchemes) CHECK(training_accuracy(s.f, labels, scheme) == 1.0);
}

TEST_CASE("shuffled labels give chance-level held-out accuracy") {
  auto s = synthetic(400, 4, 2, 2);
  auto g = rng::make_engine({99});
  std::vector<std::string> cats;
  for (const auto& p : s.pairs) cats.push_back(p.second);
  rng::shuffle(cats, g);
  for (std::size_t i = 0; i < cats.size(); ++i) s.pairs[i].second = cats[i];
  const auto labels = make_labeled_set(s.f, s.pairs);
  EvaluationOptions opts;
  opts.schemes = {Scheme::TF};
  opts.sizes = {200};
  opts.runs = 3;
  const auto grid = evaluate(s.f, labels, opts);
  CHECK(grid.cells[0][0].mean == doctest::Approx(0.25).epsilon(0.5));
  CHECK(grid.cells[0][0].mean < 0.4);
}

TEST_CASE("prediction ignores unseen tags and is scale invariant") {
  const auto s = synthetic(60, 3, 1, 3);
  auto f = s.f;
  f.add_bookmark("x", "fresh", {"never-seen"});
  const auto labels = make_labeled_set(f, s.pairs);
  const auto vs = vectorize_all(f, labels.resources(), Scheme::TF);
  const auto model = train(vs, labels);
  const auto fresh = vectorize(f, *f.find_resource("fresh"), Scheme::TF);
  CHECK(decision_scores(model, fresh).isZero());
  CHECK(predict(model, fresh) == 0);
  for (const auto& v : vs) {
    auto scaled = v;
    scaled.entries *= 3.0;
    CHECK(predict(model, scaled) == predict(model, v));
  }
  auto other = vs[0];
  other.scheme = Scheme::TF_IRF;
  CHECK_THROWS_AS(predict(model, other), std::invalid_argument);
}

TEST_CASE("subgradient agrees with central finite differences") {
  auto g = rng::make_engine({5});
  const Eigen::Index n = 30, d = 20, k = 5;
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<CategoryId> y;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (rng::uniform01(g) < 0.3) trips.emplace_back(i, j, rng::uniform01(g) * 2 - 1);
    }
    y.push_back(rng::uniform_index(g, k));
  }
  FeatureMatrix X(n, d);
  X.setFromTriplets(trips.begin(), trips.end());
  Eigen::MatrixXd W(d, k);
  for (Eigen::Index i = 0; i < W.size(); ++i) W.data()[i] = rng::uniform01(g) - 0.5;
  const double lambda = 0.1;
  const Eigen::MatrixXd G = crammer_singer_subgradient(W, X, y, lambda);
  const double h = 1e-6;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      Eigen::MatrixXd plus = W, minus = W;
      plus(i, j) += h;
      minus(i, j) -= h;
      const double fd = (crammer_singer_objective(plus, X, y, lambda) - crammer_singer_objective(minus, X, y, lambda)) /
                        (2 * h);
      CHECK(std::abs(fd - G(i, j)) <= 1e-4 * std::max(1.0, std::abs(G(i, j))));
    }
  }
}

TEST_CASE("loss picks the strongest rival") {
  Eigen::RowVector3d scores(0.5, 2.0, 1.8);
  Eigen::Index other = -1;
  CHECK(crammer_singer_loss(scores, 1, &other) == doctest::Approx(0.8));
  CHECK(other == 2);
  CHECK(crammer_singer_loss(scores, 0, &other) == doctest::Approx(2.5));
  CHECK(other == 1);
  CHECK(crammer_singer_loss(Eigen::RowVector2d(3.0, 1.0), 0) == 0.0);
}

TEST_CASE("running mean of the per-epoch objective does not increase") {
  const auto s = synthetic(300, 6, 4, 6);
  const auto labels = make_labeled_set(s.f, s.pairs);
  const auto vs = vectorize_all(s.f, labels.resources(), Scheme::TF_IUF);
  const auto model = train(vs, labels);
  const auto& h = model.objective_history;
  REQUIRE(h.size() == model.hyper.epochs);
  CHECK(h.back() < 1.0);  // objective at W = 0
  double sum = h[0], prev = h[0];
  for (std::size_t e = 1; e < h.size(); ++e) {
    sum += h[e];
    const double mean = sum / double(e + 1);
    CHECK(mean <= prev + 1e-6);
    prev = mean;
  }
}

TEST_CASE("training is deterministic for a fixed seed") {
  const auto s = synthetic(120, 4, 3, 7);
  const auto labels = make_labeled_set(s.f, s.pairs);
  const auto vs = vectorize_all(s.f, labels.resources(), Scheme::TF_IBF);
  const auto a = train(vs, labels);
  const auto b = train(vs, labels);
  CHECK(a.weights == b.weights);
  CHECK(a.lambda == doctest::Approx(1.0 / (0.01 * 120 * 120)));
  Hyperparameters other;
  other.seed = 43;
  CHECK(train(vs, labels, other).weights != a.weights);
}

TEST_CASE("bias feature and explicit lambda") {
  const auto s = synthetic(80, 4, 2, 8);
  const auto labels = make_labeled_set(s.f, s.pairs);
  Hyperparameters h;
  h.bias = true;
  h.lambda = 1e-3;
  const auto vs = vectorize_all(s.f, labels.resources(), Scheme::TF);
  const auto model = train(vs, labels, h);
  CHECK(model.lambda == 1e-3);
  CHECK(model.weights.rows() == static_cast<Eigen::Index>(model.vocabulary.size() + 1));
  CHECK(training_accuracy(s.f, labels, Scheme::TF, h) == 1.0);
}

TEST_CASE("training rejects degenerate input") {
  const auto s = synthetic(20, 2, 1, 9);
  const auto labels = make_labeled_set(s.f, s.pairs);
  auto vs = vectorize_all(s.f, labels.resources(), Scheme::TF);
  CHECK_THROWS_AS(train(std::span<const WeightedVector>{}, labels), std::invalid_argument);
  const std::vector<WeightedVector> one_class{vs[0], vs[2]};
  CHECK_THROWS_AS(train(one_class, labels), std::invalid_argument);
  auto mixed = vs;
  mixed[1].scheme = Scheme::TF_IRF;
  CHECK_THROWS_AS(train(mixed, labels), std::invalid_argument);
  LabeledSet partial = labels;
  partial.labels.erase(vs[0].resource);
  CHECK_THROWS_AS(train(vs, partial), std::invalid_argument);
}

TEST_CASE("evaluation grid") {
  const auto s = synthetic(60, 3, 1, 10);
  const auto labels = make_labeled_set(s.f, s.pairs);
  EvaluationOptions opts;
  opts.sizes = {59};
  opts.runs = 1;
  const auto full = evaluate(s.f, labels, opts);
  for (Scheme scheme : kAllSchemes) CHECK(full.cell(scheme, 59).mean == 1.0);

  opts.sizes = {10, 30};
  opts.runs = 4;
  opts.jobs = 3;
  const auto grid = evaluate(s.f, labels, opts);
  REQUIRE(grid.cells.size() == 4);
  for (const auto& row : grid.cells) {
    REQUIRE(row.size() == 2);
    for (const auto& cell : row) {
      REQUIRE(cell.per_run.size() == 4);
      double sum = 0;
      for (double a : cell.per_run) {
        CHECK(a >= 0.0);
        CHECK(a <= 1.0);
        sum += a;
      }
      CHECK(cell.mean == doctest::Approx(sum / 4));
    }
  }
  opts.jobs = 1;
  const auto serial = evaluate(s.f, labels, opts);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t z = 0; z < 2; ++z) CHECK(serial.cells[i][z].per_run == grid.cells[i][z].per_run);

  opts.sizes = {60};
  CHECK_THROWS_AS(evaluate(s.f, labels, opts), std::invalid_argument);
  opts.sizes = {0};
  CHECK_THROWS_AS(evaluate(s.f, labels, opts), std::invalid_argument);
  CHECK_THROWS_AS(grid.cell(Scheme::TF, 11), std::out_of_range);

  std::ostringstream table, runs;
  write_grid_csv(table, grid);
  write_grid_runs_csv(runs, grid);
  CHECK(table.str().rfind("scheme,10,30\nTF,", 0) == 0);
  CHECK(runs.str().rfind("scheme,size,run,accuracy\nTF,10,1,", 0) == 0);
}

TEST_CASE("label loading") {
  Folksonomy f;
  for (auto r : {"a", "b", "c", "d"}) f.add_bookmark("u", r, {"t"});
  std::istringstream in("a\tE\nb\tF\n\nc\tQ\nzz\tE\n");
  const auto plain = load_labels(in, f);
  CHECK(plain.categories == std::vector<std::string>{"E", "F", "Q"});
  CHECK(plain.dropped_unknown == 1);
  CHECK(plain.labels.size() == 3);

  std::istringstream again("a\tE\nb\tF\nc\tQ\n");
  LabelOptions merge;
  merge.lcc_merge_ef = true;
  const auto merged = load_labels(again, f, merge);
  CHECK(merged.categories == std::vector<std::string>{"E", "Q"});
  CHECK(merged.labels.at(*f.find_resource("b")) == 0);

  std::istringstream conflict("a\tE\na\tQ\n");
  CHECK_THROWS_AS(load_labels(conflict, f), std::runtime_error);
  std::istringstream bad("a E\n");
  CHECK_THROWS_AS(load_labels(bad, f), std::runtime_error);
  std::istringstream count("a\tE\nb\tQ\n");
  LabelOptions expect;
  expect.expected_categories = 3;
  CHECK_THROWS_AS(load_labels(count, f, expect), std::runtime_error);

  CHECK(taxonomy_category_count("odp") == 17);
  CHECK(taxonomy_category_count("ddc") == 10);
  CHECK(taxonomy_category_count("lcc") == 20);
  CHECK_THROWS_AS(taxonomy_category_count("udc"), std::invalid_argument);
}
