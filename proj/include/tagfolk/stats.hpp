#ifndef TAGFOLK_STATS_HPP
#define TAGFOLK_STATS_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tagfolk/folksonomy.hpp"
#include "tagfolk/ingest.hpp"

namespace tagfolk {

enum class EntityKind { Resources, Users, Bookmarks };

std::string_view to_string(EntityKind kind);

/// Mean number of distinct tags per resource, per user (personomy size) and
/// per bookmark.
struct AverageTagCounts {
  double per_resource = 0;
  double per_user = 0;
  double per_bookmark = 0;
};

AverageTagCounts avg_distinct_tags(const Folksonomy& f);

struct RankPoint {
  double rank_percent = 0;
  double coverage_percent = 0;
};

/// Share of entities of one kind annotated with each tag, tags ordered by
/// descending share (ties by tag id).
struct RankUsageCurve {
  EntityKind kind = EntityKind::Resources;
  std::vector<TagId> tags;
  std::vector<RankPoint> points;
};

RankUsageCurve rank_usage_curve(const Folksonomy& f, EntityKind kind);

/// Mean coverage_percent over the first ceil(10%) of the curve.
double top_decile_coverage(const RankUsageCurve& curve);

enum class Relation { Greater, Equal, Less };

/// Fractions of tags for which one frequency is greater than, equal to or
/// less than another. Index each pair by Relation.
struct RubComparison {
  std::array<double, 3> b_vs_u{};
  std::array<double, 3> r_vs_u{};
  std::array<double, 3> b_vs_r{};
  Count n_tags = 0;
};

RubComparison rub_comparison(const Folksonomy& f);

struct NoveltyPoint {
  std::size_t rank = 0;
  double mean_novelty = 0;
  Count n_resources = 0;
};

struct NoveltyCurve {
  std::vector<NoveltyPoint> points;
};

/// Mean fraction of tags that a resource's k-th bookmark adds to the tags of
/// its earlier bookmarks, for k = 1..max_rank. Ranks no resource reaches are
/// omitted. Throws std::logic_error on an unordered folksonomy.
NoveltyCurve novelty_curve(const Folksonomy& f, std::size_t max_rank = 100);

/// For each bookmark of `r` in seq order, the tags it introduced.
std::vector<std::vector<TagId>> new_tags_per_rank(const Folksonomy& f, ResourceId r);

struct AvailabilityRow {
  std::string kind;
  Count annotated = 0;
  Count total = 0;
  std::string percent;  // two decimals
};

std::vector<AvailabilityRow> availability_report(const IngestReport& report);

/// Fixed-point formatting used by every CSV writer.
std::string format_fixed(double value, int decimals = 6);

void write_rank_usage_csv(std::ostream& out, const Folksonomy& f, const RankUsageCurve& curve);
void write_rub_csv(std::ostream& out, const RubComparison& rub);
void write_novelty_csv(std::ostream& out, const NoveltyCurve& curve);
void write_averages_csv(std::ostream& out, const AverageTagCounts& avg);
void write_availability_csv(std::ostream& out, const std::vector<AvailabilityRow>& rows, Count distinct_tags);

/// Quotes a CSV field if it contains a separator, quote or newline.
std::string csv_field(std::string_view s);

}  // namespace tagfolk

#endif  // TAGFOLK_STATS_HPP
