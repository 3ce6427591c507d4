#ifndef TAGFOLK_SIMULATOR_HPP
#define TAGFOLK_SIMULATOR_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tagfolk/classifier.hpp"
#include "tagfolk/folksonomy.hpp"
#include "tagfolk/ingest.hpp"
#include "tagfolk/stats.hpp"

namespace tagfolk {

/// What the tagging interface offers while a bookmark is being annotated.
enum class SuggestionPolicy {
  None,              // nothing
  ResourceSuggest,   // top tags of the resource's earlier bookmarks
  PersonomySuggest,  // top tags of the user's own earlier bookmarks
};

std::string_view to_string(SuggestionPolicy p);
/// Accepts none, resource_suggest (or resource), personomy_suggest (or personomy).
SuggestionPolicy parse_policy(std::string_view name);

/// Mean tags per bookmark observed under each policy's reference system:
/// 2.46 without suggestions, 3.75 with resource suggestions, 1.55 with
/// personomy suggestions.
double default_tags_per_bookmark(SuggestionPolicy p);

struct SimConfig {
  SuggestionPolicy policy = SuggestionPolicy::None;
  std::size_t n_users = 2000;
  std::size_t n_resources = 2000;
  std::size_t n_categories = 10;
  double bookmarks_per_user = 25.0;
  double tags_per_bookmark = 2.46;
  std::size_t vocab_size = 5000;
  double zipf_exponent = 1.0;
  /// Tags per category pool; pools are disjoint slices of the vocabulary.
  std::size_t category_pool_size = 50;
  /// Zipf exponent of resource popularity; 0 picks resources uniformly.
  double resource_popularity_exponent = 1.0;
  double suggestion_acceptance = 0.5;
  std::size_t n_suggestions = 10;
  double signal_strength = 0.3;
  std::uint64_t seed = 42;

  /// Defaults with tags_per_bookmark calibrated to the policy.
  static SimConfig defaults(SuggestionPolicy policy);
  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;
};

struct SimResult {
  Folksonomy folksonomy;
  LabeledSet labels;
  /// Generated bookmarks in insertion order, `order_hint` = generation index.
  std::vector<RawRecord> records;
  /// (resource, category) for every generated resource with a bookmark.
  std::vector<std::pair<std::string, std::string>> label_pairs;
};

/// Deterministic for a given config. Resource categories, bookmark events
/// and tag draws come from separate streams so runs that differ only in
/// policy or acceptance share the same users, resources and event order.
SimResult generate(const SimConfig& cfg);

/// Summary statistics used to calibrate simulated data.
struct Description {
  std::size_t n_users = 0;
  std::size_t n_resources = 0;
  std::size_t n_bookmarks = 0;
  std::size_t n_tags = 0;
  AverageTagCounts averages;
  RubComparison rub;
  /// top_decile_coverage of the resources, users and bookmarks curves.
  std::array<double, 3> top_decile{};
};

Description describe(const Folksonomy& f);

void write_description(std::ostream& out, const Description& d);
void write_jsonl(std::ostream& out, const std::vector<RawRecord>& records);
void write_labels_tsv(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& pairs);

}  // namespace tagfolk

#endif  // TAGFOLK_SIMULATOR_HPP
