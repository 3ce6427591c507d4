#include "tagfolk/simulator.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "tagfolk/random.hpp"

namespace tagfolk {
namespace {

std::string padded(char prefix, std::size_t value, std::size_t count) {
  const int width = static_cast<int>(std::to_string(count > 0 ? count - 1 : 0).size());
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, value);
  return buf;
}

using Counts = std::unordered_map<std::uint32_t, std::uint32_t>;

// Top-n tags by count, ties by vocabulary index.
std::vector<std::uint32_t> top_tags(const Counts& counts, std::size_t n) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> items(counts.begin(), counts.end());
  auto by_rank = [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; };
  const auto k = std::min(n, items.size());
  std::partial_sort(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(k), items.end(), by_rank);
  std::vector<std::uint32_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(items[i].first);
  return out;
}

}  // namespace

std::string_view to_string(SuggestionPolicy p) {
  switch (p) {
    case SuggestionPolicy::None: return "none";
    case SuggestionPolicy::ResourceSuggest: return "resource_suggest";
    case SuggestionPolicy::PersonomySuggest: return "personomy_suggest";
  }
  return "?";
}

SuggestionPolicy parse_policy(std::string_view name) {
  if (name == "none") return SuggestionPolicy::None;
  if (name == "resource_suggest" || name == "resource") return SuggestionPolicy::ResourceSuggest;
  if (name == "personomy_suggest" || name == "personomy") return SuggestionPolicy::PersonomySuggest;
  throw std::invalid_argument("unknown policy '" + std::string(name) + "' (expected none, resource_suggest, personomy_suggest)");
}

double default_tags_per_bookmark(SuggestionPolicy p) {
  switch (p) {
    case SuggestionPolicy::None: return 2.46;
    case SuggestionPolicy::ResourceSuggest: return 3.75;
    case SuggestionPolicy::PersonomySuggest: return 1.55;
  }
  return 2.46;
}

SimConfig SimConfig::defaults(SuggestionPolicy policy) {
  SimConfig cfg;
  cfg.policy = policy;
  cfg.tags_per_bookmark = default_tags_per_bookmark(policy);
  return cfg;
}

void SimConfig::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("invalid simulator config: ") + what);
  };
  need(n_users >= 1, "n_users must be >= 1");
  need(n_resources >= 1, "n_resources must be >= 1");
  need(n_categories >= 1, "n_categories must be >= 1");
  need(vocab_size >= 1, "vocab_size must be >= 1");
  need(category_pool_size >= 1, "category_pool_size must be >= 1");
  need(n_suggestions >= 1, "n_suggestions must be >= 1");
  need(bookmarks_per_user >= 1.0, "bookmarks_per_user must be >= 1");
  need(tags_per_bookmark >= 1.0, "tags_per_bookmark must be >= 1");
  need(zipf_exponent > 0.0, "zipf_exponent must be > 0");
  need(resource_popularity_exponent >= 0.0, "resource_popularity_exponent must be >= 0");
  need(suggestion_acceptance >= 0.0 && suggestion_acceptance <= 1.0, "suggestion_acceptance must be in [0,1]");
  need(signal_strength >= 0.0 && signal_strength <= 1.0, "signal_strength must be in [0,1]");
  need(n_categories * category_pool_size <= vocab_size, "category pools do not fit in the vocabulary");
}

SimResult generate(const SimConfig& cfg) {
  cfg.validate();
  auto structure = rng::make_engine({cfg.seed, 1});
  auto events_rng = rng::make_engine({cfg.seed, 2});
  auto tag_rng = rng::make_engine({cfg.seed, 3});

  // Global popularity order and disjoint category pools over the vocabulary.
  std::vector<std::uint32_t> zipf_rank(cfg.vocab_size);
  for (std::uint32_t i = 0; i < zipf_rank.size(); ++i) zipf_rank[i] = i;
  rng::shuffle(zipf_rank, structure);
  std::vector<std::uint32_t> pool_order(cfg.vocab_size);
  for (std::uint32_t i = 0; i < pool_order.size(); ++i) pool_order[i] = i;
  rng::shuffle(pool_order, structure);
  std::vector<std::vector<std::uint32_t>> pools(cfg.n_categories);
  for (std::size_t c = 0; c < cfg.n_categories; ++c) {
    pools[c].assign(pool_order.begin() + static_cast<std::ptrdiff_t>(c * cfg.category_pool_size),
                    pool_order.begin() + static_cast<std::ptrdiff_t>((c + 1) * cfg.category_pool_size));
  }

  // Balanced category assignment.
  std::vector<std::size_t> category(cfg.n_resources);
  for (std::size_t r = 0; r < cfg.n_resources; ++r) category[r] = r % cfg.n_categories;
  rng::shuffle(category, structure);
  std::vector<std::uint32_t> popularity(cfg.n_resources);
  for (std::uint32_t i = 0; i < popularity.size(); ++i) popularity[i] = i;
  rng::shuffle(popularity, structure);

  // (user, resource) events; a user bookmarks a resource at most once.
  const rng::ZipfSampler resource_sampler(cfg.n_resources, cfg.resource_popularity_exponent);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> events;
  for (std::uint32_t u = 0; u < cfg.n_users; ++u) {
    const auto wanted = std::min<std::size_t>(cfg.n_resources, 1 + rng::poisson(events_rng, cfg.bookmarks_per_user - 1.0));
    std::unordered_set<std::uint32_t> chosen;
    std::size_t attempts = 0;
    while (chosen.size() < wanted && attempts < 50 * wanted) {
      ++attempts;
      chosen.insert(popularity[resource_sampler(events_rng)]);
    }
    for (std::uint32_t r = 0; chosen.size() < wanted; ++r) chosen.insert(r);
    std::vector<std::uint32_t> sorted(chosen.begin(), chosen.end());
    std::sort(sorted.begin(), sorted.end());
    for (auto r : sorted) events.emplace_back(u, r);
  }
  rng::shuffle(events, events_rng);

  const rng::ZipfSampler tag_sampler(cfg.vocab_size, cfg.zipf_exponent);
  std::vector<Counts> resource_counts(cfg.n_resources);
  std::vector<Counts> user_counts(cfg.n_users);

  std::vector<std::string> tag_names(cfg.vocab_size);
  for (std::size_t t = 0; t < cfg.vocab_size; ++t) tag_names[t] = padded('t', t, cfg.vocab_size);

  SimResult out;
  out.records.reserve(events.size());
  std::vector<std::uint32_t> chosen;
  for (std::size_t e = 0; e < events.size(); ++e) {
    const auto [u, r] = events[e];
    std::vector<std::uint32_t> suggestions;
    if (cfg.policy == SuggestionPolicy::ResourceSuggest) suggestions = top_tags(resource_counts[r], cfg.n_suggestions);
    if (cfg.policy == SuggestionPolicy::PersonomySuggest) suggestions = top_tags(user_counts[u], cfg.n_suggestions);

    const auto n_tags = 1 + rng::poisson(tag_rng, cfg.tags_per_bookmark - 1.0);
    chosen.clear();
    for (std::size_t slot = 0; slot < n_tags; ++slot) {
      for (int attempt = 0; attempt < 32; ++attempt) {
        std::uint32_t tag = 0;
        bool have = false;
        if (rng::bernoulli(tag_rng, cfg.suggestion_acceptance)) {
          std::vector<std::uint32_t> open;
          for (auto s : suggestions) {
            if (std::find(chosen.begin(), chosen.end(), s) == chosen.end()) open.push_back(s);
          }
          if (!open.empty()) {
            tag = open[rng::uniform_index(tag_rng, open.size())];
            have = true;
          }
        }
        if (!have) {
          if (rng::bernoulli(tag_rng, cfg.signal_strength)) {
            const auto& pool = pools[category[r]];
            tag = pool[rng::uniform_index(tag_rng, pool.size())];
          } else {
            tag = zipf_rank[tag_sampler(tag_rng)];
          }
        }
        if (std::find(chosen.begin(), chosen.end(), tag) == chosen.end()) {
          chosen.push_back(tag);
          break;
        }
      }
    }

    RawRecord rec{padded('u', u, cfg.n_users), padded('r', r, cfg.n_resources), {}, static_cast<std::int64_t>(e)};
    for (auto t : chosen) {
      ++resource_counts[r][t];
      ++user_counts[u][t];
      rec.tags.push_back(tag_names[t]);
    }
    out.folksonomy.add_bookmark(rec.user, rec.resource, rec.tags);
    out.records.push_back(std::move(rec));
  }

  for (std::uint32_t r = 0; r < cfg.n_resources; ++r) {
    auto name = padded('r', r, cfg.n_resources);
    if (out.folksonomy.find_resource(name)) out.label_pairs.emplace_back(std::move(name), padded('c', category[r], cfg.n_categories));
  }
  out.labels = make_labeled_set(out.folksonomy, out.label_pairs);
  return out;
}

Description describe(const Folksonomy& f) {
  Description d;
  d.n_users = f.n_users();
  d.n_resources = f.n_resources();
  d.n_bookmarks = f.n_bookmarks();
  d.n_tags = f.n_tags();
  if (f.empty()) return d;
  d.averages = avg_distinct_tags(f);
  d.rub = rub_comparison(f);
  d.top_decile = {top_decile_coverage(rank_usage_curve(f, EntityKind::Resources)),
                  top_decile_coverage(rank_usage_curve(f, EntityKind::Users)),
                  top_decile_coverage(rank_usage_curve(f, EntityKind::Bookmarks))};
  return d;
}

void write_description(std::ostream& out, const Description& d) {
  out << "users," << d.n_users << '\n'
      << "resources," << d.n_resources << '\n'
      << "bookmarks," << d.n_bookmarks << '\n'
      << "tags," << d.n_tags << '\n'
      << "avg_tags_per_resource," << format_fixed(d.averages.per_resource) << '\n'
      << "avg_tags_per_user," << format_fixed(d.averages.per_user) << '\n'
      << "avg_tags_per_bookmark," << format_fixed(d.averages.per_bookmark) << '\n';
  const char* ops[3] = {">", "=", "<"};
  for (std::size_t i = 0; i < 3; ++i) out << "b" << ops[i] << "u," << format_fixed(d.rub.b_vs_u[i]) << '\n';
  for (std::size_t i = 0; i < 3; ++i) out << "r" << ops[i] << "u," << format_fixed(d.rub.r_vs_u[i]) << '\n';
  for (std::size_t i = 0; i < 3; ++i) out << "b" << ops[i] << "r," << format_fixed(d.rub.b_vs_r[i]) << '\n';
  out << "top_decile_coverage_resources," << format_fixed(d.top_decile[0]) << '\n'
      << "top_decile_coverage_users," << format_fixed(d.top_decile[1]) << '\n'
      << "top_decile_coverage_bookmarks," << format_fixed(d.top_decile[2]) << '\n';
}

void write_jsonl(std::ostream& out, const std::vector<RawRecord>& records) {
  for (const auto& rec : records) {
    nlohmann::ordered_json j;
    j["user"] = rec.user;
    j["resource"] = rec.resource;
    j["tags"] = rec.tags;
    if (rec.order_hint) j["seq"] = *rec.order_hint;
    out << j.dump() << '\n';
  }
}

void write_labels_tsv(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& pairs) {
  for (const auto& [r, c] : pairs) out << r << '\t' << c << '\n';
}

}  // namespace tagfolk
