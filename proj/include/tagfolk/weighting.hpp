#ifndef TAGFOLK_WEIGHTING_HPP
#define TAGFOLK_WEIGHTING_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/SparseCore>

#include "tagfolk/folksonomy.hpp"

namespace tagfolk {

enum class Scheme { TF, TF_IRF, TF_IUF, TF_IBF };

inline constexpr Scheme kAllSchemes[] = {Scheme::TF, Scheme::TF_IRF, Scheme::TF_IUF, Scheme::TF_IBF};

/// Display name, e.g. "TF-IRF".
std::string_view to_string(Scheme s);
/// Accepts "tf", "tf-irf", "tf-iuf", "tf-ibf" (case-insensitive).
Scheme parse_scheme(std::string_view name);
/// Comma-separated list of scheme names.
std::vector<Scheme> parse_schemes(std::string_view list);

/// Sparse tag-weight representation of one resource. Indices are tag ids.
struct WeightedVector {
  ResourceId resource;
  Scheme scheme = Scheme::TF;
  Eigen::SparseVector<double> entries;
};

/// ln(n_total / n_tag). Zero exactly when the tag occurs in every entity.
/// Throws std::domain_error unless 1 <= n_tag <= n_total.
double inverse_frequency(Count n_tag, Count n_total);

/// tf(t, r) times the scheme's inverse frequency for every tag of `r`.
/// Zero weights are dropped; the result is L2-normalized when requested.
/// Throws std::out_of_range for an unknown resource.
WeightedVector vectorize(const Folksonomy& f, ResourceId resource, Scheme scheme, bool normalize = true);

std::vector<WeightedVector> vectorize_all(const Folksonomy& f, std::span<const ResourceId> resources, Scheme scheme,
                                          bool normalize = true);

/// `resource tag:weight ...` with pairs in tag id order.
void write_vector(std::ostream& out, const Folksonomy& f, const WeightedVector& v);

}  // namespace tagfolk

#endif  // TAGFOLK_WEIGHTING_HPP
