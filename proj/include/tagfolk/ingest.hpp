#ifndef TAGFOLK_INGEST_HPP
#define TAGFOLK_INGEST_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tagfolk/folksonomy.hpp"

namespace tagfolk {

enum class InputFormat { Jsonl, Tsv };

InputFormat parse_input_format(std::string_view name);

/// One bookmark as read from disk, before any filtering.
struct RawRecord {
  std::string user;
  std::string resource;
  std::vector<std::string> tags;
  std::optional<std::int64_t> order_hint;
};

struct ParseError {
  std::size_t line = 0;
  std::string message;
};

struct ParseResult {
  std::vector<RawRecord> records;
  std::vector<ParseError> errors;

  std::size_t malformed() const { return errors.size(); }
};

/// Reads one record per line. Blank lines are skipped; malformed lines are
/// recorded in `errors` with their 1-based line number and skipped.
/// Throws std::runtime_error if the stream cannot be read.
ParseResult parse_stream(std::istream& in, InputFormat format);
ParseResult parse_file(const std::filesystem::path& path, InputFormat format);

/// Accepts a non-negative integer or an ISO-8601 UTC timestamp
/// (`YYYY-MM-DD`, `YYYY-MM-DDTHH:MM:SS`, optional trailing `Z`), the latter
/// converted to seconds since the epoch.
std::optional<std::int64_t> parse_order_hint(std::string_view text);

struct Availability {
  Count annotated = 0;
  Count total = 0;

  /// 100 * annotated / total, or 0 when total is 0.
  double percent() const {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(annotated) / static_cast<double>(total);
  }
};

struct IngestReport {
  Availability users;
  Availability bookmarks;
  Availability resources;
  Count distinct_tags = 0;
  Count auto_tags_stripped = 0;
  Count malformed_lines = 0;
  /// True when every annotated record carried an order hint and insertion
  /// followed it; false means file order was used.
  bool ordered_by_hint = false;
};

struct IngestResult {
  Folksonomy folksonomy;
  IngestReport report;
};

/// The reading-state tags GoodReads attaches to every bookmark.
std::set<std::string> goodreads_auto_tags();

/// Strips auto tags (compared after normalization), drops records left
/// without tags and inserts the rest. If every kept record has an order hint
/// they are inserted in hint order (stable), otherwise in input order.
IngestResult build_folksonomy(std::span<const RawRecord> records, const std::set<std::string>& auto_tags,
                              std::size_t malformed_lines = 0);

/// Resources bookmarked by at least `min_users` distinct users, by id.
std::vector<ResourceId> filter_popular(const Folksonomy& f, Count min_users);

/// Folksonomy cache: a JSONL header line
/// `{"format":"tagfolk-folksonomy","version":1,"ordered":true}` followed by
/// the bookmarks in insertion order (normalized tags).
inline constexpr int kCacheVersion = 1;
void write_cache(std::ostream& out, const Folksonomy& f);
/// Throws std::runtime_error on a foreign file, a version mismatch or a
/// malformed line.
Folksonomy read_cache(std::istream& in);

}  // namespace tagfolk

#endif  // TAGFOLK_INGEST_HPP
