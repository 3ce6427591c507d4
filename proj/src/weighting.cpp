#include "tagfolk/weighting.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "tagfolk/stats.hpp"

namespace tagfolk {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::TF: return "TF";
    case Scheme::TF_IRF: return "TF-IRF";
    case Scheme::TF_IUF: return "TF-IUF";
    case Scheme::TF_IBF: return "TF-IBF";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  std::string lower;
  for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (Scheme s : kAllSchemes) {
    std::string candidate;
    for (char c : to_string(s)) candidate += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (candidate == lower) return s;
  }
  throw std::invalid_argument("unknown weighting scheme '" + std::string(name) + "'");
}

std::vector<Scheme> parse_schemes(std::string_view list) {
  std::vector<Scheme> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    auto item = list.substr(start, end - start);
    if (!item.empty()) out.push_back(parse_scheme(item));
    start = end + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty scheme list");
  return out;
}

double inverse_frequency(Count n_tag, Count n_total) {
  if (n_tag == 0 || n_tag > n_total) {
    throw std::domain_error("inverse_frequency: need 1 <= n_tag <= n_total (got " + std::to_string(n_tag) + ", " +
                            std::to_string(n_total) + ")");
  }
  return std::log(static_cast<double>(n_total) / static_cast<double>(n_tag));
}

WeightedVector vectorize(const Folksonomy& f, ResourceId resource, Scheme scheme, bool normalize) {
  if (resource.index() >= f.n_resources()) throw std::out_of_range("vectorize: unknown resource");
  WeightedVector v{resource, scheme, Eigen::SparseVector<double>(static_cast<Eigen::Index>(f.n_tags()))};
  const auto& counts = f.resource_tags(resource);
  v.entries.reserve(static_cast<Eigen::Index>(counts.size()));
  // TagCounts iterates in ascending id order, as insertBack requires.
  for (const auto& [tag, tf] : counts) {
    double ixf = 1.0;
    const auto fr = f.frequencies(tag);
    switch (scheme) {
      case Scheme::TF: break;
      case Scheme::TF_IRF: ixf = inverse_frequency(fr.rf, f.n_resources()); break;
      case Scheme::TF_IUF: ixf = inverse_frequency(fr.uf, f.n_users()); break;
      case Scheme::TF_IBF: ixf = inverse_frequency(fr.bf, f.n_bookmarks()); break;
    }
    const double w = static_cast<double>(tf) * ixf;
    if (w != 0.0) v.entries.insertBack(static_cast<Eigen::Index>(tag.index())) = w;
  }
  if (normalize && v.entries.nonZeros() > 0) v.entries /= v.entries.norm();
  return v;
}

std::vector<WeightedVector> vectorize_all(const Folksonomy& f, std::span<const ResourceId> resources, Scheme scheme,
                                          bool normalize) {
  std::vector<WeightedVector> out;
  out.reserve(resources.size());
  for (auto r : resources) out.push_back(vectorize(f, r, scheme, normalize));
  return out;
}

void write_vector(std::ostream& out, const Folksonomy& f, const WeightedVector& v) {
  out << f.resource_name(v.resource);
  for (Eigen::SparseVector<double>::InnerIterator it(v.entries); it; ++it) {
    out << ' ' << f.tag_name(TagId{static_cast<std::uint32_t>(it.index())}) << ':' << format_fixed(it.value());
  }
  out << '\n';
}

}  // namespace tagfolk
