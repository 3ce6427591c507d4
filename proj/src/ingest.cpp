#include "tagfolk/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "tagfolk/normalize.hpp"

namespace tagfolk {
namespace {

using json = nlohmann::json;

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct LineError {
  std::string message;
};

RawRecord parse_tsv_line(std::string_view line) {
  auto cols = split(line, '\t');
  if (cols.size() < 3 || cols.size() > 4) {
    throw LineError{"expected 3 or 4 tab-separated columns, got " + std::to_string(cols.size())};
  }
  RawRecord rec;
  rec.user = std::string(cols[0]);
  rec.resource = std::string(cols[1]);
  if (rec.user.empty()) throw LineError{"empty user"};
  if (rec.resource.empty()) throw LineError{"empty resource"};
  if (!cols[2].empty()) {
    for (auto t : split(cols[2], ',')) {
      if (!t.empty()) rec.tags.emplace_back(t);
    }
  }
  if (cols.size() == 4 && !cols[3].empty()) {
    rec.order_hint = parse_order_hint(cols[3]);
    if (!rec.order_hint) throw LineError{"invalid seq '" + std::string(cols[3]) + "'"};
  }
  return rec;
}

RawRecord parse_jsonl_line(std::string_view line) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw LineError{std::string("invalid JSON: ") + e.what()};
  }
  if (!obj.is_object()) throw LineError{"expected a JSON object"};

  RawRecord rec;
  auto str_field = [&](const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) throw LineError{std::string("missing string field '") + key + "'"};
    auto s = it->get<std::string>();
    if (s.empty()) throw LineError{std::string("empty field '") + key + "'"};
    return s;
  };
  rec.user = str_field("user");
  rec.resource = str_field("resource");

  auto tags = obj.find("tags");
  if (tags == obj.end() || !tags->is_array()) throw LineError{"missing array field 'tags'"};
  for (const auto& t : *tags) {
    if (!t.is_string()) throw LineError{"non-string tag"};
    rec.tags.push_back(t.get<std::string>());
  }

  if (auto seq = obj.find("seq"); seq != obj.end() && !seq->is_null()) {
    if (seq->is_number_unsigned()) {
      rec.order_hint = seq->get<std::int64_t>();
    } else if (seq->is_string()) {
      rec.order_hint = parse_order_hint(seq->get<std::string>());
    }
    if (!rec.order_hint) throw LineError{"invalid 'seq'"};
  }
  return rec;
}

}  // namespace

InputFormat parse_input_format(std::string_view name) {
  if (name == "jsonl") return InputFormat::Jsonl;
  if (name == "tsv") return InputFormat::Tsv;
  throw std::invalid_argument("unknown input format '" + std::string(name) + "' (expected jsonl or tsv)");
}

std::optional<std::int64_t> parse_order_hint(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return parse_int(text);
  }
  if (text.back() == 'Z') text.remove_suffix(1);
  if (text.size() != 10 && text.size() != 19) return std::nullopt;
  auto field = [&](std::size_t pos, std::size_t len) { return parse_int(text.substr(pos, len)); };
  if (text[4] != '-' || text[7] != '-') return std::nullopt;
  auto y = field(0, 4);
  auto mo = field(5, 2);
  auto d = field(8, 2);
  if (!y || !mo || !d || *mo < 1 || *mo > 12 || *d < 1 || *d > 31) return std::nullopt;
  std::int64_t secs = days_from_civil(*y, static_cast<unsigned>(*mo), static_cast<unsigned>(*d)) * 86400;
  if (text.size() == 19) {
    if ((text[10] != 'T' && text[10] != ' ') || text[13] != ':' || text[16] != ':') return std::nullopt;
    auto h = field(11, 2);
    auto mi = field(14, 2);
    auto s = field(17, 2);
    if (!h || !mi || !s || *h > 23 || *mi > 59 || *s > 60) return std::nullopt;
    secs += *h * 3600 + *mi * 60 + *s;
  }
  if (secs < 0) return std::nullopt;
  return secs;
}

ParseResult parse_stream(std::istream& in, InputFormat format) {
  if (!in) throw std::runtime_error("input stream is not readable");
  ParseResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      result.records.push_back(format == InputFormat::Tsv ? parse_tsv_line(line) : parse_jsonl_line(line));
    } catch (const LineError& e) {
      result.errors.push_back({lineno, e.message});
    }
  }
  if (in.bad()) throw std::runtime_error("I/O error while reading input at line " + std::to_string(lineno + 1));
  return result;
}

ParseResult parse_file(const std::filesystem::path& path, InputFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return parse_stream(in, format);
}

std::set<std::string> goodreads_auto_tags() { return {"read", "currently-reading", "to-read"}; }

IngestResult build_folksonomy(std::span<const RawRecord> records, const std::set<std::string>& auto_tags,
                              std::size_t malformed_lines) {
  std::set<std::string> stripped_set;
  for (const auto& t : auto_tags) stripped_set.insert(normalize_tag(t));

  IngestResult out;
  auto& report = out.report;
  report.malformed_lines = malformed_lines;

  std::unordered_set<std::string> all_users, all_resources;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> kept;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    all_users.insert(rec.user);
    all_resources.insert(rec.resource);
    std::vector<std::string> tags;
    for (const auto& raw : rec.tags) {
      auto n = normalize_tag(raw);
      if (n.empty()) continue;
      if (stripped_set.contains(n)) {
        ++report.auto_tags_stripped;
        continue;
      }
      tags.push_back(std::move(n));
    }
    if (!tags.empty()) kept.emplace_back(i, std::move(tags));
  }

  report.ordered_by_hint =
      !kept.empty() && std::all_of(kept.begin(), kept.end(), [&](const auto& k) { return records[k.first].order_hint.has_value(); });
  if (report.ordered_by_hint) {
    std::stable_sort(kept.begin(), kept.end(), [&](const auto& a, const auto& b) {
      return *records[a.first].order_hint < *records[b.first].order_hint;
    });
  }

  for (const auto& [i, tags] : kept) {
    out.folksonomy.add_bookmark(records[i].user, records[i].resource, tags);
  }

  const auto& f = out.folksonomy;
  report.users = {f.n_users(), all_users.size()};
  report.resources = {f.n_resources(), all_resources.size()};
  report.bookmarks = {f.n_bookmarks(), records.size()};
  report.distinct_tags = f.n_tags();
  return out;
}

std::vector<ResourceId> filter_popular(const Folksonomy& f, Count min_users) {
  if (min_users < 1) throw std::invalid_argument("filter_popular: min_users must be >= 1");
  std::vector<ResourceId> out;
  for (std::size_t r = 0; r < f.n_resources(); ++r) {
    const ResourceId rid{static_cast<std::uint32_t>(r)};
    std::vector<UserId> users;
    for (auto b : f.bookmarks_of(rid)) users.push_back(f.bookmarks()[b].user);
    std::sort(users.begin(), users.end());
    const auto distinct = static_cast<Count>(std::unique(users.begin(), users.end()) - users.begin());
    if (distinct >= min_users) out.push_back(rid);
  }
  return out;
}

void write_cache(std::ostream& out, const Folksonomy& f) {
  nlohmann::ordered_json header;
  header["format"] = "tagfolk-folksonomy";
  header["version"] = kCacheVersion;
  header["ordered"] = f.ordered();
  out << header.dump() << '\n';
  for (std::size_t i = 0; i < f.n_bookmarks(); ++i) {
    const auto& b = f.bookmarks()[i];
    nlohmann::ordered_json j;
    j["user"] = f.user_name(b.user);
    j["resource"] = f.resource_name(b.resource);
    auto& tags = j["tags"] = json::array();
    for (TagId t : b.tags) tags.push_back(f.tag_name(t));
    j["seq"] = i;
    out << j.dump() << '\n';
  }
}

Folksonomy read_cache(std::istream& in) {
  if (!in) throw std::runtime_error("cache stream is not readable");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("cache is empty");
  json header;
  try {
    header = json::parse(line);
  } catch (const json::parse_error&) {
    throw std::runtime_error("not a tagfolk folksonomy cache");
  }
  if (!header.is_object() || header.value("format", "") != "tagfolk-folksonomy") {
    throw std::runtime_error("not a tagfolk folksonomy cache");
  }
  if (header.value("version", -1) != kCacheVersion) {
    throw std::runtime_error("unsupported cache version " + header.value("version", json(-1)).dump());
  }
  Folksonomy f;
  f.set_ordered(header.value("ordered", true));
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto rec = parse_jsonl_line(line);
      f.add_bookmark(rec.user, rec.resource, rec.tags);
    } catch (const LineError& e) {
      throw std::runtime_error("cache line " + std::to_string(lineno) + ": " + e.message);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("cache line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (in.bad()) throw std::runtime_error("I/O error while reading cache");
  return f;
}

}  // namespace tagfolk
