#include "tagfolk/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

#include "tagfolk/random.hpp"
#include "tagfolk/stats.hpp"

namespace tagfolk {

std::vector<ResourceId> LabeledSet::resources() const {
  std::vector<ResourceId> out;
  out.reserve(labels.size());
  for (const auto& [r, c] : labels) out.push_back(r);
  return out;
}

std::size_t taxonomy_category_count(std::string_view taxonomy) {
  if (taxonomy == "odp") return 17;
  if (taxonomy == "ddc") return 10;
  if (taxonomy == "lcc") return 20;
  throw std::invalid_argument("unknown taxonomy '" + std::string(taxonomy) + "' (expected odp, ddc or lcc)");
}

LabeledSet make_labeled_set(const Folksonomy& f, std::span<const std::pair<std::string, std::string>> pairs,
                            const LabelOptions& options) {
  std::map<ResourceId, std::string> named;
  std::set<std::string> names;
  LabeledSet out;
  for (const auto& [resource, raw_category] : pairs) {
    std::string category = raw_category;
    if (options.lcc_merge_ef && category == "F") category = "E";
    auto r = f.find_resource(resource);
    if (!r) {
      ++out.dropped_unknown;
      continue;
    }
    auto [it, inserted] = named.emplace(*r, category);
    if (!inserted && it->second != category) {
      throw std::runtime_error("resource '" + resource + "' labeled both '" + it->second + "' and '" + category + "'");
    }
    names.insert(category);
  }
  out.categories.assign(names.begin(), names.end());
  for (const auto& [r, name] : named) {
    auto pos = std::lower_bound(out.categories.begin(), out.categories.end(), name);
    out.labels.emplace(r, static_cast<CategoryId>(pos - out.categories.begin()));
  }
  if (options.expected_categories && *options.expected_categories != out.categories.size()) {
    throw std::runtime_error("expected " + std::to_string(*options.expected_categories) + " categories, found " +
                             std::to_string(out.categories.size()));
  }
  return out;
}

LabeledSet load_labels(std::istream& in, const Folksonomy& f, const LabelOptions& options) {
  if (!in) throw std::runtime_error("labels stream is not readable");
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() || line.find('\t', tab + 1) != std::string::npos) {
      throw std::runtime_error("labels line " + std::to_string(lineno) + ": expected 'resource<TAB>category'");
    }
    pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  if (in.bad()) throw std::runtime_error("I/O error while reading labels");
  return make_labeled_set(f, pairs, options);
}

double Hyperparameters::regularization(std::size_t n) const {
  if (lambda) return *lambda;
  const double c = c_factor * static_cast<double>(n);
  return 1.0 / (c * static_cast<double>(n));
}

std::optional<Eigen::Index> LinearModel::feature_index(TagId tag) const {
  auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), tag);
  if (it == vocabulary.end() || *it != tag) return std::nullopt;
  return static_cast<Eigen::Index>(it - vocabulary.begin());
}

WeightMatrix train_crammer_singer(const FeatureMatrix& X, std::span<const CategoryId> y, std::size_t n_categories,
                                  double lambda, std::size_t epochs, std::uint64_t seed,
                                  std::vector<double>* objective_history) {
  if (X.rows() == 0) throw std::invalid_argument("train: no training examples");
  if (static_cast<std::size_t>(X.rows()) != y.size()) throw std::invalid_argument("train: label count mismatch");
  if (n_categories < 2) throw std::invalid_argument("train: need at least two categories");
  if (!(lambda > 0)) throw std::invalid_argument("train: regularization must be positive");

  const auto K = static_cast<Eigen::Index>(n_categories);
  // W = scale * V keeps the shrink step O(1).
  WeightMatrix V = WeightMatrix::Zero(X.cols(), K);
  double scale = 1.0;
  double v_norm2 = 0.0;
  const double radius = 1.0 / std::sqrt(lambda);

  auto engine = rng::make_engine({seed});
  std::vector<Eigen::Index> order(static_cast<std::size_t>(X.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Eigen::RowVectorXd scores(K);
  std::uint64_t t = 0;

  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    rng::shuffle(order, engine);
    for (Eigen::Index i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const auto label = static_cast<Eigen::Index>(y[static_cast<std::size_t>(i)]);

      scores.setZero();
      for (FeatureMatrix::InnerIterator it(X, i); it; ++it) scores.noalias() += it.value() * V.row(it.col());
      scores *= scale;
      Eigen::Index other = 0;
      const bool violated = crammer_singer_loss(scores, label, &other) > 0.0;

      scale *= 1.0 - eta * lambda;
      if (scale == 0.0) {
        V.setZero();
        scale = 1.0;
        v_norm2 = 0.0;
      }
      if (violated) {
        const double step = eta / scale;
        for (FeatureMatrix::InnerIterator it(X, i); it; ++it) {
          double& up = V(it.col(), label);
          double& down = V(it.col(), other);
          const double old2 = up * up + down * down;
          up += step * it.value();
          down -= step * it.value();
          v_norm2 += up * up + down * down - old2;
        }
      }
      const double w_norm = scale * std::sqrt(std::max(v_norm2, 0.0));
      if (w_norm > radius) scale *= radius / w_norm;
      if (scale < 1e-9) {
        V *= scale;
        scale = 1.0;
        v_norm2 = V.squaredNorm();
      }
    }
    V *= scale;
    scale = 1.0;
    v_norm2 = V.squaredNorm();
    if (objective_history) objective_history->push_back(crammer_singer_objective(V, X, y, lambda));
  }
  return V;
}

LinearModel train(std::span<const WeightedVector> vectors, const LabeledSet& labels, const Hyperparameters& hyper) {
  if (vectors.empty()) throw std::invalid_argument("train: empty training set");
  const Scheme scheme = vectors.front().scheme;
  std::vector<CategoryId> y;
  y.reserve(vectors.size());
  std::set<TagId> vocab;
  for (const auto& v : vectors) {
    if (v.scheme != scheme) throw std::invalid_argument("train: vectors use different weighting schemes");
    auto it = labels.labels.find(v.resource);
    if (it == labels.labels.end()) throw std::invalid_argument("train: vector of an unlabeled resource");
    y.push_back(it->second);
    for (Eigen::SparseVector<double>::InnerIterator e(v.entries); e; ++e) {
      vocab.insert(TagId{static_cast<std::uint32_t>(e.index())});
    }
  }
  if (std::set<CategoryId>(y.begin(), y.end()).size() < 2) {
    throw std::invalid_argument("train: training set covers a single category");
  }

  LinearModel model;
  model.scheme = scheme;
  model.hyper = hyper;
  model.vocabulary.assign(vocab.begin(), vocab.end());
  const auto n_features = static_cast<Eigen::Index>(model.vocabulary.size() + (hyper.bias ? 1 : 0));

  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (Eigen::SparseVector<double>::InnerIterator e(vectors[i].entries); e; ++e) {
      const auto col = *model.feature_index(TagId{static_cast<std::uint32_t>(e.index())});
      triplets.emplace_back(static_cast<Eigen::Index>(i), col, e.value());
    }
    if (hyper.bias) triplets.emplace_back(static_cast<Eigen::Index>(i), n_features - 1, 1.0);
  }
  FeatureMatrix X(static_cast<Eigen::Index>(vectors.size()), n_features);
  X.setFromTriplets(triplets.begin(), triplets.end());

  model.lambda = hyper.regularization(vectors.size());
  model.weights = train_crammer_singer(X, y, labels.n_categories(), model.lambda, hyper.epochs, hyper.seed,
                                       &model.objective_history);
  return model;
}

Eigen::VectorXd decision_scores(const LinearModel& model, const WeightedVector& v) {
  if (v.scheme != model.scheme) throw std::invalid_argument("predict: vector scheme differs from the model's");
  Eigen::RowVectorXd scores = Eigen::RowVectorXd::Zero(model.weights.cols());
  for (Eigen::SparseVector<double>::InnerIterator e(v.entries); e; ++e) {
    if (auto row = model.feature_index(TagId{static_cast<std::uint32_t>(e.index())})) {
      scores.noalias() += e.value() * model.weights.row(*row);
    }
  }
  if (model.hyper.bias) scores += model.weights.row(model.weights.rows() - 1);
  return scores.transpose();
}

CategoryId predict(const LinearModel& model, const WeightedVector& v) {
  const Eigen::VectorXd scores = decision_scores(model, v);
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < scores.size(); ++k) {
    if (scores(k) > scores(best)) best = k;
  }
  return static_cast<CategoryId>(best);
}

const GridCell& AccuracyGrid::cell(Scheme scheme, std::size_t size) const {
  auto s = std::find(schemes.begin(), schemes.end(), scheme);
  auto z = std::find(sizes.begin(), sizes.end(), size);
  if (s == schemes.end() || z == sizes.end()) throw std::out_of_range("AccuracyGrid: no such cell");
  return cells[static_cast<std::size_t>(s - schemes.begin())][static_cast<std::size_t>(z - sizes.begin())];
}

AccuracyGrid evaluate(const Folksonomy& f, const LabeledSet& labels, const EvaluationOptions& options) {
  const auto resources = labels.resources();
  if (options.sizes.empty()) throw std::invalid_argument("evaluate: no training sizes");
  if (options.schemes.empty()) throw std::invalid_argument("evaluate: no schemes");
  if (options.runs == 0) throw std::invalid_argument("evaluate: runs must be >= 1");
  for (auto size : options.sizes) {
    if (size == 0 || size >= resources.size()) {
      throw std::invalid_argument("evaluate: training size " + std::to_string(size) + " must be in [1, " +
                                  std::to_string(resources.size()) + ") labeled resources");
    }
  }

  std::vector<std::vector<WeightedVector>> vectors;
  for (Scheme s : options.schemes) vectors.push_back(vectorize_all(f, resources, s, options.normalize));
  std::vector<CategoryId> truth;
  for (auto r : resources) truth.push_back(labels.labels.at(r));

  // One task per (size, run); all schemes share the task's split.
  const std::size_t n_tasks = options.sizes.size() * options.runs;
  std::vector<std::vector<double>> accuracy(n_tasks, std::vector<double>(options.schemes.size()));
  std::vector<std::exception_ptr> errors(n_tasks);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t task = next++; task < n_tasks; task = next++) {
      try {
        const std::size_t size = options.sizes[task / options.runs];
        const std::size_t run = task % options.runs;
        std::vector<std::size_t> perm(resources.size());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        auto engine = rng::make_engine({options.seed, size, run});
        rng::shuffle(perm, engine);

        for (std::size_t s = 0; s < options.schemes.size(); ++s) {
          std::vector<WeightedVector> sample;
          sample.reserve(size);
          for (std::size_t i = 0; i < size; ++i) sample.push_back(vectors[s][perm[i]]);
          const auto model = train(sample, labels, options.hyper);
          std::size_t correct = 0;
          for (std::size_t i = size; i < perm.size(); ++i) {
            if (predict(model, vectors[s][perm[i]]) == truth[perm[i]]) ++correct;
          }
          accuracy[task][s] = static_cast<double>(correct) / static_cast<double>(perm.size() - size);
        }
      } catch (...) {
        errors[task] = std::current_exception();
      }
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, n_tasks));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  AccuracyGrid grid;
  grid.schemes = options.schemes;
  grid.sizes = options.sizes;
  grid.runs = options.runs;
  grid.cells.assign(options.schemes.size(), std::vector<GridCell>(options.sizes.size()));
  for (std::size_t s = 0; s < options.schemes.size(); ++s) {
    for (std::size_t z = 0; z < options.sizes.size(); ++z) {
      auto& cell = grid.cells[s][z];
      for (std::size_t run = 0; run < options.runs; ++run) cell.per_run.push_back(accuracy[z * options.runs + run][s]);
      cell.mean = std::accumulate(cell.per_run.begin(), cell.per_run.end(), 0.0) / static_cast<double>(options.runs);
    }
  }
  return grid;
}

void write_grid_csv(std::ostream& out, const AccuracyGrid& grid) {
  out << "scheme";
  for (auto size : grid.sizes) out << ',' << size;
  out << '\n';
  for (std::size_t s = 0; s < grid.schemes.size(); ++s) {
    out << to_string(grid.schemes[s]);
    for (const auto& cell : grid.cells[s]) out << ',' << format_fixed(cell.mean);
    out << '\n';
  }
}

void write_grid_runs_csv(std::ostream& out, const AccuracyGrid& grid) {
  out << "scheme,size,run,accuracy\n";
  for (std::size_t s = 0; s < grid.schemes.size(); ++s) {
    for (std::size_t z = 0; z < grid.sizes.size(); ++z) {
      const auto& runs = grid.cells[s][z].per_run;
      for (std::size_t r = 0; r < runs.size(); ++r) {
        out << to_string(grid.schemes[s]) << ',' << grid.sizes[z] << ',' << (r + 1) << ',' << format_fixed(runs[r]) << '\n';
      }
    }
  }
}

}  // namespace tagfolk
