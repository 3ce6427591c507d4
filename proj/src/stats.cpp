#include "tagfolk/stats.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace tagfolk {
namespace {

void require_non_empty(const Folksonomy& f, const char* what) {
  if (f.empty()) throw std::invalid_argument(std::string(what) + ": folksonomy is empty");
}

Count count_for(const Frequencies& fr, EntityKind kind) {
  switch (kind) {
    case EntityKind::Resources: return fr.rf;
    case EntityKind::Users: return fr.uf;
    case EntityKind::Bookmarks: return fr.bf;
  }
  return 0;
}

Count total_for(const Folksonomy& f, EntityKind kind) {
  switch (kind) {
    case EntityKind::Resources: return f.n_resources();
    case EntityKind::Users: return f.n_users();
    case EntityKind::Bookmarks: return f.n_bookmarks();
  }
  return 0;
}

std::size_t relation(Count a, Count b) {
  if (a > b) return static_cast<std::size_t>(Relation::Greater);
  if (a == b) return static_cast<std::size_t>(Relation::Equal);
  return static_cast<std::size_t>(Relation::Less);
}

}  // namespace

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::Resources: return "resources";
    case EntityKind::Users: return "users";
    case EntityKind::Bookmarks: return "bookmarks";
  }
  return "?";
}

AverageTagCounts avg_distinct_tags(const Folksonomy& f) {
  require_non_empty(f, "avg_distinct_tags");
  AverageTagCounts avg;
  double sum = 0;
  for (std::size_t r = 0; r < f.n_resources(); ++r) {
    sum += static_cast<double>(f.resource_tags(ResourceId{static_cast<std::uint32_t>(r)}).size());
  }
  avg.per_resource = sum / static_cast<double>(f.n_resources());
  sum = 0;
  for (std::size_t u = 0; u < f.n_users(); ++u) {
    sum += static_cast<double>(f.user_tags(UserId{static_cast<std::uint32_t>(u)}).size());
  }
  avg.per_user = sum / static_cast<double>(f.n_users());
  sum = 0;
  for (const auto& b : f.bookmarks()) sum += static_cast<double>(b.tags.size());
  avg.per_bookmark = sum / static_cast<double>(f.n_bookmarks());
  return avg;
}

RankUsageCurve rank_usage_curve(const Folksonomy& f, EntityKind kind) {
  require_non_empty(f, "rank_usage_curve");
  RankUsageCurve curve;
  curve.kind = kind;
  std::vector<std::pair<Count, TagId>> ranked;
  ranked.reserve(f.n_tags());
  for (std::size_t t = 0; t < f.n_tags(); ++t) {
    const TagId id{static_cast<std::uint32_t>(t)};
    ranked.emplace_back(count_for(f.frequencies(id), kind), id);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  const double n_tags = static_cast<double>(ranked.size());
  const double total = static_cast<double>(total_for(f, kind));
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    curve.tags.push_back(ranked[i].second);
    curve.points.push_back({100.0 * static_cast<double>(i + 1) / n_tags, 100.0 * static_cast<double>(ranked[i].first) / total});
  }
  return curve;
}

double top_decile_coverage(const RankUsageCurve& curve) {
  if (curve.points.empty()) return 0.0;
  const std::size_t n = (curve.points.size() + 9) / 10;
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) sum += curve.points[i].coverage_percent;
  return sum / static_cast<double>(n);
}

RubComparison rub_comparison(const Folksonomy& f) {
  require_non_empty(f, "rub_comparison");
  RubComparison out;
  std::array<Count, 3> bu{}, ru{}, br{};
  for (std::size_t t = 0; t < f.n_tags(); ++t) {
    const auto fr = f.frequencies(TagId{static_cast<std::uint32_t>(t)});
    ++bu[relation(fr.bf, fr.uf)];
    ++ru[relation(fr.rf, fr.uf)];
    ++br[relation(fr.bf, fr.rf)];
  }
  out.n_tags = f.n_tags();
  const double n = static_cast<double>(out.n_tags);
  for (std::size_t i = 0; i < 3; ++i) {
    out.b_vs_u[i] = static_cast<double>(bu[i]) / n;
    out.r_vs_u[i] = static_cast<double>(ru[i]) / n;
    out.b_vs_r[i] = static_cast<double>(br[i]) / n;
  }
  return out;
}

std::vector<std::vector<TagId>> new_tags_per_rank(const Folksonomy& f, ResourceId r) {
  std::vector<std::vector<TagId>> out;
  std::unordered_set<TagId> seen;
  for (auto bi : f.bookmarks_of(r)) {
    auto& fresh = out.emplace_back();
    for (TagId t : f.bookmarks()[bi].tags) {
      if (seen.insert(t).second) fresh.push_back(t);
    }
  }
  return out;
}

NoveltyCurve novelty_curve(const Folksonomy& f, std::size_t max_rank) {
  if (!f.ordered()) throw std::logic_error("novelty_curve: bookmarks carry no order");
  std::vector<double> sums(max_rank, 0.0);
  std::vector<Count> counts(max_rank, 0);
  for (std::size_t r = 0; r < f.n_resources(); ++r) {
    const auto fresh = new_tags_per_rank(f, ResourceId{static_cast<std::uint32_t>(r)});
    const auto bookmarks = f.bookmarks_of(ResourceId{static_cast<std::uint32_t>(r)});
    for (std::size_t k = 0; k < std::min(max_rank, fresh.size()); ++k) {
      const auto n_tags = f.bookmarks()[bookmarks[k]].tags.size();
      sums[k] += static_cast<double>(fresh[k].size()) / static_cast<double>(n_tags);
      ++counts[k];
    }
  }
  NoveltyCurve curve;
  for (std::size_t k = 0; k < max_rank && counts[k] > 0; ++k) {
    curve.points.push_back({k + 1, sums[k] / static_cast<double>(counts[k]), counts[k]});
  }
  return curve;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s(buf);
  // Avoid "-0.000000" for values that round to zero.
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::vector<AvailabilityRow> availability_report(const IngestReport& report) {
  auto row = [](const char* kind, const Availability& a) {
    return AvailabilityRow{kind, a.annotated, a.total, format_fixed(a.percent(), 2)};
  };
  return {row("users", report.users), row("bookmarks", report.bookmarks), row("resources", report.resources)};
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_rank_usage_csv(std::ostream& out, const Folksonomy& f, const RankUsageCurve& curve) {
  out << "rank,rank_percent,coverage_percent,tag\n";
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    out << (i + 1) << ',' << format_fixed(curve.points[i].rank_percent) << ','
        << format_fixed(curve.points[i].coverage_percent) << ',' << csv_field(f.tag_name(curve.tags[i])) << '\n';
  }
}

void write_rub_csv(std::ostream& out, const RubComparison& rub) {
  out << "relation,fraction\n";
  const char* ops[3] = {">", "=", "<"};
  auto emit = [&](const char* a, const char* b, const std::array<double, 3>& fr) {
    for (std::size_t i = 0; i < 3; ++i) out << a << ops[i] << b << ',' << format_fixed(fr[i]) << '\n';
  };
  emit("b", "u", rub.b_vs_u);
  emit("r", "u", rub.r_vs_u);
  emit("b", "r", rub.b_vs_r);
}

void write_novelty_csv(std::ostream& out, const NoveltyCurve& curve) {
  out << "rank,mean_novelty,n_resources\n";
  for (const auto& p : curve.points) out << p.rank << ',' << format_fixed(p.mean_novelty) << ',' << p.n_resources << '\n';
}

void write_averages_csv(std::ostream& out, const AverageTagCounts& avg) {
  out << "measure,value\n";
  out << "per_resource," << format_fixed(avg.per_resource) << '\n';
  out << "per_user," << format_fixed(avg.per_user) << '\n';
  out << "per_bookmark," << format_fixed(avg.per_bookmark) << '\n';
}

void write_availability_csv(std::ostream& out, const std::vector<AvailabilityRow>& rows, Count distinct_tags) {
  out << "kind,annotated,total,percent\n";
  for (const auto& r : rows) out << r.kind << ',' << r.annotated << ',' << r.total << ',' << r.percent << '\n';
  out << "tags,," << distinct_tags << ",\n";
}

}  // namespace tagfolk
