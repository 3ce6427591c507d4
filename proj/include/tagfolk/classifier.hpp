#ifndef TAGFOLK_CLASSIFIER_HPP
#define TAGFOLK_CLASSIFIER_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "tagfolk/folksonomy.hpp"
#include "tagfolk/weighting.hpp"

namespace tagfolk {

using CategoryId = std::size_t;

/// Ground-truth categories for a subset of the folksonomy's resources.
/// Category ids index `categories`, which is sorted by name.
struct LabeledSet {
  std::vector<std::string> categories;
  std::map<ResourceId, CategoryId> labels;
  /// Label lines whose resource is not in the folksonomy.
  Count dropped_unknown = 0;

  std::vector<ResourceId> resources() const;
  std::size_t n_categories() const { return categories.size(); }
};

struct LabelOptions {
  /// Relabel LCC class F as E.
  bool lcc_merge_ef = false;
  /// When set, the number of distinct categories must match.
  std::optional<std::size_t> expected_categories;
};

/// Top-level category counts of the supported taxonomies: odp 17, ddc 10,
/// lcc 20 (with E and F merged).
std::size_t taxonomy_category_count(std::string_view taxonomy);

/// Builds a labeled set from (resource name, category name) pairs. Resources
/// missing from `f` are counted in `dropped_unknown`.
LabeledSet make_labeled_set(const Folksonomy& f, std::span<const std::pair<std::string, std::string>> pairs,
                            const LabelOptions& options = {});

/// Reads `resource\tcategory` lines. Throws std::runtime_error naming the
/// line on malformed input or conflicting labels.
LabeledSet load_labels(std::istream& in, const Folksonomy& f, const LabelOptions& options = {});

struct Hyperparameters {
  /// C = c_factor * n and lambda = 1 / (C * n) for n training examples.
  double c_factor = 0.01;
  /// Overrides the C-derived regularization when set.
  std::optional<double> lambda;
  std::size_t epochs = 50;
  std::uint64_t seed = 42;
  /// Appends a constant feature acting as a per-category bias.
  bool bias = false;

  double regularization(std::size_t n) const;
};

/// Row-major so one feature's weights across categories are contiguous.
using WeightMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using FeatureMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct LinearModel {
  Scheme scheme = Scheme::TF;
  /// Training vocabulary, sorted. Row i of `weights` belongs to vocabulary[i];
  /// with a bias the last row is the bias.
  std::vector<TagId> vocabulary;
  WeightMatrix weights;
  Hyperparameters hyper;
  double lambda = 0;
  /// Regularized objective after each epoch.
  std::vector<double> objective_history;

  std::size_t n_categories() const { return static_cast<std::size_t>(weights.cols()); }
  std::optional<Eigen::Index> feature_index(TagId tag) const;
};

// Crammer-Singer multiclass hinge objective
//   lambda/2 ||W||^2 + 1/n sum_i max(0, 1 + max_{k != y_i} x_i.w_k - x_i.w_{y_i})
// and one of its subgradients, for W of shape (features x categories).

template <typename Derived>
typename Derived::Scalar crammer_singer_loss(const Eigen::MatrixBase<Derived>& scores, Eigen::Index label,
                                             Eigen::Index* runner_up = nullptr) {
  using Scalar = typename Derived::Scalar;
  Eigen::Index best = label == 0 ? 1 : 0;
  for (Eigen::Index k = 0; k < scores.size(); ++k) {
    if (k != label && scores(k) > scores(best)) best = k;
  }
  if (runner_up) *runner_up = best;
  const Scalar margin = Scalar(1) + scores(best) - scores(label);
  return margin > Scalar(0) ? margin : Scalar(0);
}

template <typename Derived, typename SparseScalar>
typename Derived::Scalar crammer_singer_objective(const Eigen::MatrixBase<Derived>& W,
                                                  const Eigen::SparseMatrix<SparseScalar, Eigen::RowMajor>& X,
                                                  std::span<const CategoryId> y, typename Derived::Scalar lambda) {
  using Scalar = typename Derived::Scalar;
  Scalar loss(0);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> scores = X.row(i).template cast<Scalar>() * W;
    loss += crammer_singer_loss(scores, static_cast<Eigen::Index>(y[static_cast<std::size_t>(i)]));
  }
  return lambda / Scalar(2) * W.squaredNorm() + loss / static_cast<Scalar>(X.rows());
}

template <typename Derived, typename SparseScalar>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> crammer_singer_subgradient(
    const Eigen::MatrixBase<Derived>& W, const Eigen::SparseMatrix<SparseScalar, Eigen::RowMajor>& X,
    std::span<const CategoryId> y, typename Derived::Scalar lambda) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> G = lambda * W;
  const Scalar inv_n = Scalar(1) / static_cast<Scalar>(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> scores = X.row(i).template cast<Scalar>() * W;
    const auto label = static_cast<Eigen::Index>(y[static_cast<std::size_t>(i)]);
    Eigen::Index other = 0;
    if (crammer_singer_loss(scores, label, &other) > Scalar(0)) {
      for (typename Eigen::SparseMatrix<SparseScalar, Eigen::RowMajor>::InnerIterator it(X, i); it; ++it) {
        G(it.col(), other) += inv_n * static_cast<Scalar>(it.value());
        G(it.col(), label) -= inv_n * static_cast<Scalar>(it.value());
      }
    }
  }
  return G;
}

/// Stochastic subgradient descent on the Crammer-Singer objective with step
/// 1/(lambda t) and projection onto the ball of radius 1/sqrt(lambda).
/// Rows of X are examples; y holds their categories in [0, n_categories).
WeightMatrix train_crammer_singer(const FeatureMatrix& X, std::span<const CategoryId> y, std::size_t n_categories,
                                  double lambda, std::size_t epochs, std::uint64_t seed,
                                  std::vector<double>* objective_history = nullptr);

/// Trains on vectors of labeled resources. Throws std::invalid_argument for
/// an empty set, a single category, mixed schemes or unlabeled vectors.
LinearModel train(std::span<const WeightedVector> vectors, const LabeledSet& labels, const Hyperparameters& hyper = {});

Eigen::VectorXd decision_scores(const LinearModel& model, const WeightedVector& v);

/// Highest-scoring category; ties go to the lowest id. Tags outside the
/// training vocabulary are ignored.
CategoryId predict(const LinearModel& model, const WeightedVector& v);

struct GridCell {
  std::vector<double> per_run;
  double mean = 0;
};

/// Mean accuracy per (scheme, training size); cells[s][z] matches
/// schemes[s] and sizes[z].
struct AccuracyGrid {
  std::vector<Scheme> schemes;
  std::vector<std::size_t> sizes;
  std::size_t runs = 0;
  std::vector<std::vector<GridCell>> cells;

  const GridCell& cell(Scheme scheme, std::size_t size) const;
};

struct EvaluationOptions {
  std::vector<Scheme> schemes{std::begin(kAllSchemes), std::end(kAllSchemes)};
  std::vector<std::size_t> sizes;
  std::size_t runs = 6;
  std::uint64_t seed = 42;
  Hyperparameters hyper;
  bool normalize = true;
  std::size_t jobs = 1;
};

/// Repeated random subsampling: for each size and run, draws `size` labeled
/// resources (seeded by seed, size, run) for training and tests on all the
/// others. Every scheme sees the same split.
AccuracyGrid evaluate(const Folksonomy& f, const LabeledSet& labels, const EvaluationOptions& options);

/// Table layout: `scheme,<size>,...` with one row of mean accuracies per scheme.
void write_grid_csv(std::ostream& out, const AccuracyGrid& grid);
/// Long layout: `scheme,size,run,accuracy`.
void write_grid_runs_csv(std::ostream& out, const AccuracyGrid& grid);

}  // namespace tagfolk

#endif  // TAGFOLK_CLASSIFIER_HPP
