#include "tagfolk/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "tagfolk/classifier.hpp"
#include "tagfolk/ingest.hpp"
#include "tagfolk/simulator.hpp"
#include "tagfolk/stats.hpp"
#include "tagfolk/weighting.hpp"

namespace tagfolk {
namespace {

namespace fs = std::filesystem;

struct CommandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Files are written under a temporary name and only renamed into place by
// commit(); anything uncommitted is deleted on destruction.
class OutputSet {
 public:
  explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  ~OutputSet() {
    for (auto& [name, stream] : files_) stream.reset();
    if (!committed_) {
      std::error_code ec;
      for (const auto& [name, stream] : files_) fs::remove(tmp_path(name), ec);
      if (created_dir_) fs::remove(dir_, ec);
    }
  }

  std::ostream& open(const std::string& name) {
    if (!fs::exists(dir_)) {
      fs::create_directories(dir_);
      created_dir_ = true;
    }
    auto stream = std::make_unique<std::ofstream>(tmp_path(name), std::ios::binary | std::ios::trunc);
    if (!*stream) throw CommandError("cannot write '" + (dir_ / name).string() + "'");
    auto& ref = *stream;
    files_.emplace_back(name, std::move(stream));
    return ref;
  }

  std::vector<fs::path> commit() {
    std::vector<fs::path> written;
    for (auto& [name, stream] : files_) {
      stream->flush();
      if (!*stream) throw CommandError("failed writing '" + (dir_ / name).string() + "'");
      stream.reset();
    }
    for (const auto& [name, stream] : files_) {
      fs::rename(tmp_path(name), dir_ / name);
      written.push_back(dir_ / name);
    }
    committed_ = true;
    return written;
  }

 private:
  fs::path tmp_path(const std::string& name) const { return dir_ / (name + ".tmp"); }

  fs::path dir_;
  std::vector<std::pair<std::string, std::unique_ptr<std::ofstream>>> files_;
  bool committed_ = false;
  bool created_dir_ = false;
};

// Echoes every option so the run can be reproduced from its header.
class ConfigEcho {
 public:
  explicit ConfigEcho(std::string command) : command_(std::move(command)) {}
  template <typename T>
  ConfigEcho& add(const std::string& key, const T& value) {
    std::ostringstream ss;
    ss << value;
    entries_.emplace_back(key, ss.str());
    return *this;
  }
  void print(std::ostream& out) const {
    out << "# tagfolk " << command_ << " effective config\n";
    for (const auto& [k, v] : entries_) out << "#   " << k << " = " << v << '\n';
  }

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

template <typename T>
std::string join(const std::vector<T>& items) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < items.size(); ++i) ss << (i ? "," : "") << items[i];
  return ss.str();
}

std::string join_schemes(const std::vector<Scheme>& schemes) {
  std::vector<std::string> names;
  for (auto s : schemes) names.emplace_back(to_string(s));
  return join(names);
}

struct InputOptions {
  std::string input;
  std::string cache;
  std::string format = "jsonl";
  bool strip_goodreads = false;
  std::vector<std::string> auto_tags;
  bool unordered = false;
  bool skip_malformed = false;

  void attach(CLI::App& cmd) {
    cmd.add_option("input", input, "Bookmark file (jsonl or tsv)");
    cmd.add_option("--cache", cache, "Folksonomy cache written by `ingest --cache`");
    cmd.add_option("--format", format, "Input format")->check(CLI::IsMember({"jsonl", "tsv"}));
    cmd.add_flag("--strip-goodreads", strip_goodreads, "Strip read, currently-reading and to-read");
    cmd.add_option("--auto-tags", auto_tags, "Additional auto tags to strip")->delimiter(',');
    cmd.add_flag("--unordered", unordered, "Bookmark order is meaningless (disables novelty)");
    cmd.add_flag("--skip-malformed", skip_malformed, "Skip malformed lines instead of failing");
  }

  void echo(ConfigEcho& e) const {
    if (!cache.empty()) {
      e.add("cache", cache);
      return;
    }
    e.add("input", input).add("format", format).add("strip_goodreads", strip_goodreads);
    e.add("auto_tags", join(auto_tags)).add("unordered", unordered).add("skip_malformed", skip_malformed);
  }

  std::set<std::string> auto_tag_set() const {
    std::set<std::string> tags(auto_tags.begin(), auto_tags.end());
    if (strip_goodreads) {
      auto gr = goodreads_auto_tags();
      tags.insert(gr.begin(), gr.end());
    }
    return tags;
  }

  IngestResult load(std::ostream& err) const {
    if (input.empty() == cache.empty()) throw CommandError("give exactly one of an input file or --cache");
    if (!cache.empty()) {
      std::ifstream in(cache, std::ios::binary);
      if (!in) throw CommandError("cannot open cache '" + cache + "'");
      IngestResult r{read_cache(in), {}};
      if (unordered) r.folksonomy.set_ordered(false);
      return r;
    }
    auto parsed = parse_file(input, parse_input_format(format));
    for (const auto& e : parsed.errors) err << input << ':' << e.line << ": " << e.message << '\n';
    if (parsed.malformed() > 0 && !skip_malformed) {
      throw CommandError(std::to_string(parsed.malformed()) + " malformed line(s) in '" + input + "'");
    }
    auto result = build_folksonomy(parsed.records, auto_tag_set(), parsed.malformed());
    result.folksonomy.set_ordered(!unordered);
    return result;
  }
};

void print_availability(std::ostream& out, const IngestReport& report) {
  out << "kind       annotated       total  percent\n";
  for (const auto& row : availability_report(report)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-9s %10llu %11llu  %6s%%\n", row.kind.c_str(),
                  static_cast<unsigned long long>(row.annotated), static_cast<unsigned long long>(row.total),
                  row.percent.c_str());
    out << buf;
  }
  out << "tags " << report.distinct_tags << ", auto tags stripped " << report.auto_tags_stripped
      << ", malformed lines " << report.malformed_lines << '\n';
}

void print_written(std::ostream& out, const std::vector<fs::path>& files) {
  for (const auto& p : files) out << "wrote " << p.string() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Folksonomy analysis, tag weighting and tag-based classification"};
  app.name("tagfolk");
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Load bookmarks, print tag availability, optionally write a cache");
  InputOptions ingest_in;
  ingest_in.attach(*ingest);
  std::string ingest_out, ingest_cache_out;
  std::uint64_t min_users = 0;
  ingest->add_option("--out", ingest_out, "Directory for availability.csv");
  ingest->add_option("--write-cache", ingest_cache_out, "Write the folksonomy cache to this file");
  ingest->add_option("--min-users", min_users, "Also list resources bookmarked by at least this many users");

  // stats
  auto* stats = app.add_subcommand("stats", "Distribution analyses as CSV files");
  InputOptions stats_in;
  stats_in.attach(*stats);
  std::string stats_out = "stats";
  std::size_t max_rank = 100;
  stats->add_option("--out", stats_out, "Output directory");
  stats->add_option("--max-rank", max_rank, "Last bookmark rank of the novelty curve")->check(CLI::PositiveNumber);

  // classify
  auto* classify = app.add_subcommand("classify", "Accuracy grid of tag-based classification");
  InputOptions classify_in;
  classify_in.attach(*classify);
  std::string labels_path, classify_out = "classify", schemes_arg = "tf,tf-irf,tf-iuf,tf-ibf", taxonomy;
  std::vector<std::size_t> sizes;
  EvaluationOptions eval;
  bool no_normalize = false, lcc_merge_ef = false;
  double lambda = 0;
  classify->add_option("--labels", labels_path, "TSV of resource<TAB>category")->required();
  classify->add_option("--out", classify_out, "Output directory");
  classify->add_option("--schemes", schemes_arg, "Comma-separated weighting schemes");
  classify->add_option("--sizes", sizes, "Training set sizes")->delimiter(',')->required();
  classify->add_option("--runs", eval.runs, "Random selections per size")->check(CLI::PositiveNumber);
  classify->add_option("--seed", eval.seed, "Sampling seed");
  classify->add_option("--jobs", eval.jobs, "Parallel training jobs")->check(CLI::PositiveNumber);
  classify->add_flag("--no-normalize", no_normalize, "Disable L2 normalization of vectors");
  classify->add_flag("--lcc-merge-ef", lcc_merge_ef, "Merge LCC classes E and F");
  classify->add_option("--taxonomy", taxonomy, "Check the category count of odp, ddc or lcc")
      ->check(CLI::IsMember({"odp", "ddc", "lcc"}));
  classify->add_option("--epochs", eval.hyper.epochs, "SGD epochs")->check(CLI::PositiveNumber);
  classify->add_option("--c-factor", eval.hyper.c_factor, "C = c_factor * n")->check(CLI::PositiveNumber);
  classify->add_option("--lambda", lambda, "Fixed regularization (overrides --c-factor)")->check(CLI::PositiveNumber);
  classify->add_option("--train-seed", eval.hyper.seed, "SGD example-order seed");
  classify->add_flag("--bias", eval.hyper.bias, "Add a per-category bias feature");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic folksonomy with categories");
  std::string policy_arg = "none", sim_out = "sim";
  SimConfig sim;
  double tags_per_bookmark = 0;
  simulate->add_option("--policy", policy_arg, "none, resource_suggest or personomy_suggest");
  simulate->add_option("--out", sim_out, "Output directory");
  simulate->add_option("--users", sim.n_users, "Number of users");
  simulate->add_option("--resources", sim.n_resources, "Number of resources");
  simulate->add_option("--categories", sim.n_categories, "Number of categories");
  simulate->add_option("--bookmarks-per-user", sim.bookmarks_per_user, "Mean bookmarks per user");
  simulate->add_option("--tags-per-bookmark", tags_per_bookmark, "Mean tags per bookmark (default depends on policy)");
  simulate->add_option("--vocab", sim.vocab_size, "Vocabulary size");
  simulate->add_option("--zipf", sim.zipf_exponent, "Zipf exponent of global tag draws");
  simulate->add_option("--pool-size", sim.category_pool_size, "Tags per category pool");
  simulate->add_option("--resource-zipf", sim.resource_popularity_exponent, "Zipf exponent of resource popularity");
  simulate->add_option("--acceptance", sim.suggestion_acceptance, "Probability a tag slot takes a suggestion");
  simulate->add_option("--suggestions", sim.n_suggestions, "Suggestions shown per bookmark");
  simulate->add_option("--signal", sim.signal_strength, "Probability a fresh tag comes from the category pool");
  simulate->add_option("--seed", sim.seed, "Generator seed");

  // vectorize
  auto* vectorize_cmd = app.add_subcommand("vectorize", "Dump weighted resource vectors");
  InputOptions vec_in;
  vec_in.attach(*vectorize_cmd);
  std::string vec_scheme = "tf", vec_out = "vectors";
  bool vec_no_normalize = false;
  vectorize_cmd->add_option("--scheme", vec_scheme, "Weighting scheme");
  vectorize_cmd->add_option("--out", vec_out, "Output directory");
  vectorize_cmd->add_flag("--no-normalize", vec_no_normalize, "Disable L2 normalization");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*ingest) {
      ConfigEcho echo("ingest");
      ingest_in.echo(echo);
      echo.add("out", ingest_out).add("write_cache", ingest_cache_out).add("min_users", min_users);
      echo.print(out);
      auto result = ingest_in.load(err);
      print_availability(out, result.report);
      std::vector<fs::path> written;
      std::unique_ptr<OutputSet> outputs;
      if (!ingest_out.empty()) {
        outputs = std::make_unique<OutputSet>(ingest_out);
        write_availability_csv(outputs->open("availability.csv"), availability_report(result.report),
                               result.report.distinct_tags);
        if (min_users > 0) {
          auto& pop = outputs->open("popular.txt");
          for (auto r : filter_popular(result.folksonomy, min_users)) pop << result.folksonomy.resource_name(r) << '\n';
        }
      }
      if (min_users > 0) {
        out << "popular resources (>= " << min_users << " users): " << filter_popular(result.folksonomy, min_users).size()
            << '\n';
      }
      std::unique_ptr<OutputSet> cache_out;
      if (!ingest_cache_out.empty()) {
        fs::path p(ingest_cache_out);
        cache_out = std::make_unique<OutputSet>(p.has_parent_path() ? p.parent_path() : fs::path("."));
        write_cache(cache_out->open(p.filename().string()), result.folksonomy);
      }
      if (outputs) written = outputs->commit();
      if (cache_out) {
        auto more = cache_out->commit();
        written.insert(written.end(), more.begin(), more.end());
      }
      print_written(out, written);
      return 0;
    }

    if (*stats) {
      ConfigEcho echo("stats");
      stats_in.echo(echo);
      echo.add("out", stats_out).add("max_rank", max_rank);
      echo.print(out);
      auto result = stats_in.load(err);
      const auto& f = result.folksonomy;
      if (f.empty()) throw CommandError("folksonomy has no annotated bookmarks");
      OutputSet outputs(stats_out);
      for (auto kind : {EntityKind::Resources, EntityKind::Users, EntityKind::Bookmarks}) {
        write_rank_usage_csv(outputs.open("rank_usage_" + std::string(to_string(kind)) + ".csv"), f,
                             rank_usage_curve(f, kind));
      }
      write_rub_csv(outputs.open("rub.csv"), rub_comparison(f));
      write_averages_csv(outputs.open("averages.csv"), avg_distinct_tags(f));
      if (f.ordered()) {
        write_novelty_csv(outputs.open("novelty.csv"), novelty_curve(f, max_rank));
      } else {
        out << "novelty.csv skipped: bookmarks are declared unordered\n";
      }
      print_written(out, outputs.commit());
      return 0;
    }

    if (*classify) {
      eval.schemes = parse_schemes(schemes_arg);
      eval.sizes = sizes;
      eval.normalize = !no_normalize;
      if (lambda > 0) eval.hyper.lambda = lambda;
      ConfigEcho echo("classify");
      classify_in.echo(echo);
      echo.add("labels", labels_path).add("out", classify_out).add("schemes", join_schemes(eval.schemes));
      echo.add("sizes", join(eval.sizes)).add("runs", eval.runs).add("seed", eval.seed).add("jobs", eval.jobs);
      echo.add("normalize", eval.normalize).add("lcc_merge_ef", lcc_merge_ef).add("taxonomy", taxonomy);
      echo.add("epochs", eval.hyper.epochs).add("c_factor", eval.hyper.c_factor);
      echo.add("lambda", eval.hyper.lambda ? std::to_string(*eval.hyper.lambda) : "1/(c_factor*n*n)");
      echo.add("train_seed", eval.hyper.seed).add("bias", eval.hyper.bias);
      echo.print(out);

      auto result = classify_in.load(err);
      std::ifstream lin(labels_path, std::ios::binary);
      if (!lin) throw CommandError("cannot open labels '" + labels_path + "'");
      LabelOptions lopt;
      lopt.lcc_merge_ef = lcc_merge_ef;
      if (!taxonomy.empty()) lopt.expected_categories = taxonomy_category_count(taxonomy);
      const auto labels = load_labels(lin, result.folksonomy, lopt);
      out << "labeled resources " << labels.labels.size() << " in " << labels.n_categories() << " categories";
      if (labels.dropped_unknown > 0) out << " (" << labels.dropped_unknown << " labels without annotated resource)";
      out << '\n';

      const auto grid = evaluate(result.folksonomy, labels, eval);
      OutputSet outputs(classify_out);
      write_grid_csv(outputs.open("grid.csv"), grid);
      write_grid_runs_csv(outputs.open("grid_runs.csv"), grid);
      write_grid_csv(out, grid);
      print_written(out, outputs.commit());
      return 0;
    }

    if (*simulate) {
      sim.policy = parse_policy(policy_arg);
      sim.tags_per_bookmark = tags_per_bookmark > 0 ? tags_per_bookmark : default_tags_per_bookmark(sim.policy);
      ConfigEcho echo("simulate");
      echo.add("policy", to_string(sim.policy)).add("out", sim_out).add("users", sim.n_users);
      echo.add("resources", sim.n_resources).add("categories", sim.n_categories);
      echo.add("bookmarks_per_user", sim.bookmarks_per_user).add("tags_per_bookmark", sim.tags_per_bookmark);
      echo.add("vocab", sim.vocab_size).add("zipf", sim.zipf_exponent).add("pool_size", sim.category_pool_size);
      echo.add("resource_zipf", sim.resource_popularity_exponent).add("acceptance", sim.suggestion_acceptance);
      echo.add("suggestions", sim.n_suggestions).add("signal", sim.signal_strength).add("seed", sim.seed);
      echo.print(out);

      const auto result = generate(sim);
      OutputSet outputs(sim_out);
      write_jsonl(outputs.open("bookmarks.jsonl"), result.records);
      write_labels_tsv(outputs.open("labels.tsv"), result.label_pairs);
      const auto description = describe(result.folksonomy);
      auto& summary = outputs.open("summary.csv");
      summary << "measure,value\n";
      write_description(summary, description);
      write_description(out, description);
      print_written(out, outputs.commit());
      return 0;
    }

    if (*vectorize_cmd) {
      const Scheme scheme = parse_scheme(vec_scheme);
      ConfigEcho echo("vectorize");
      vec_in.echo(echo);
      echo.add("scheme", to_string(scheme)).add("normalize", !vec_no_normalize).add("out", vec_out);
      echo.print(out);
      auto result = vec_in.load(err);
      OutputSet outputs(vec_out);
      auto& file = outputs.open("vectors.txt");
      for (std::size_t r = 0; r < result.folksonomy.n_resources(); ++r) {
        write_vector(file, result.folksonomy,
                     vectorize(result.folksonomy, ResourceId{static_cast<std::uint32_t>(r)}, scheme, !vec_no_normalize));
      }
      print_written(out, outputs.commit());
      return 0;
    }
  } catch (const std::exception& e) {
    err << "tagfolk: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace tagfolk
