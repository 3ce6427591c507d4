#ifndef TAGFOLK_RANDOM_HPP
#define TAGFOLK_RANDOM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

// Sampling helpers built only on std::mt19937_64, whose output sequence is
// fixed by the standard. The std:: distributions are implementation defined,
// so they are avoided to keep outputs identical across toolchains.
namespace tagfolk::rng {

using Engine = std::mt19937_64;

inline Engine make_engine(std::initializer_list<std::uint64_t> key) {
  std::vector<std::uint32_t> words;
  for (auto k : key) {
    words.push_back(static_cast<std::uint32_t>(k));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Engine(seq);
}

/// Uniform double in [0, 1).
inline double uniform01(Engine& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Engine& g, double p) { return uniform01(g) < p; }

/// Uniform integer in [0, n), rejection sampled to stay unbiased.
inline std::uint64_t uniform_index(Engine& g, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = g();
  } while (x >= limit);
  return x % n;
}

template <typename T>
void shuffle(std::vector<T>& v, Engine& g) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_index(g, i)]);
  }
}

/// Poisson draw by inversion; intended for small means.
inline std::uint64_t poisson(Engine& g, double mean) {
  if (mean <= 0.0) return 0;
  const double u = uniform01(g);
  double p = std::exp(-mean);
  double cdf = p;
  std::uint64_t k = 0;
  while (u >= cdf && k < 10000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
    if (p == 0.0) break;
  }
  return k;
}

/// Samples ranks 0..n-1 with P(k) proportional to 1 / (k+1)^exponent.
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double exponent) : cdf_(n) {
    if (n == 0) throw std::invalid_argument("ZipfSampler: empty support");
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += 1.0 / std::pow(static_cast<double>(k + 1), exponent);
      cdf_[k] = acc;
    }
    for (auto& c : cdf_) c /= acc;
    cdf_.back() = 1.0;
  }

  std::size_t operator()(Engine& g) const {
    const double u = uniform01(g);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return it == cdf_.end() ? cdf_.size() - 1 : static_cast<std::size_t>(it - cdf_.begin());
  }

  std::size_t size() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

}  // namespace tagfolk::rng

#endif  // TAGFOLK_RANDOM_HPP
