#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "burstlab/model.hpp"
#include "burstlab/outcomes.hpp"
#include "burstlab/report.hpp"
#include "burstlab/segment.hpp"
#include "burstlab/stats.hpp"
#include "burstlab/synth.hpp"

namespace {

using namespace burstlab;
using nlohmann::ordered_json;

struct CommonOpts {
  std::string input;
  std::string out_dir = ".";
  double n_multiplier = 75.0;
  std::optional<std::string> lexicon, moc_phrases, mood_map, filter;
  std::string format = "both";  // csv|json|both
  std::uint64_t seed = 0;
  double max_error_rate = 0.0;
  bool no_filter = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_input) {
  auto* in = cmd->add_option("--input", opts.input, "input corpus, one JSON post per line");
  if (needs_input) in->required();
  cmd->add_option("--out-dir", opts.out_dir, "directory for generated files");
  cmd->add_option("--n", opts.n_multiplier, "burst threshold multiplier")->check(CLI::PositiveNumber);
  cmd->add_option("--lexicon", opts.lexicon, "support/affect lexicon JSON");
  cmd->add_option("--moc-phrases", opts.moc_phrases, "change-point phrase list JSON");
  cmd->add_option("--mood-map", opts.mood_map, "mood group map JSON");
  cmd->add_option("--filter", opts.filter, "user filter config JSON");
  cmd->add_option("--format", opts.format, "table output format")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  cmd->add_option("--seed", opts.seed, "seed folded into permutation randomness");
  cmd->add_option("--max-error-rate", opts.max_error_rate,
                  "tolerated share of invalid input lines");
  cmd->add_flag("--no-filter", opts.no_filter, "skip user filtering");
}

RunConfig to_run_config(const CommonOpts& opts) {
  RunConfig cfg;
  cfg.input_path = opts.input;
  cfg.out_dir = opts.out_dir;
  cfg.n_multiplier = opts.n_multiplier;
  cfg.apply_filter = !opts.no_filter;
  if (opts.filter) cfg.filter = FilterConfig::load(*opts.filter);
  cfg.lexicon_path = opts.lexicon;
  cfg.moc_phrases_path = opts.moc_phrases;
  cfg.mood_map_path = opts.mood_map;
  cfg.write_csv = opts.format != "json";
  cfg.write_json = opts.format != "csv";
  cfg.max_error_rate = opts.max_error_rate;
  cfg.seed = opts.seed;
  return cfg;
}

int cmd_ingest(const CommonOpts& opts) {
  const MoodMap moods = opts.mood_map ? MoodMap::load(*opts.mood_map) : MoodMap::bundled();
  ParseResult parsed = parse_posts_file(opts.input, moods);
  const std::size_t n_lines = parsed.lines;
  BuildResult built = build_corpus(std::move(parsed.posts), moods);
  const std::size_t n_errors = parsed.errors.size() + built.errors.size();

  Corpus corpus = std::move(built.corpus);
  const std::size_t users_total = corpus.timelines.size();
  if (!opts.no_filter) {
    const FilterConfig filter =
        opts.filter ? FilterConfig::load(*opts.filter) : FilterConfig{};
    corpus = filter_users(corpus, filter);
  }

  ordered_json summary;
  summary["n_lines"] = n_lines;
  summary["n_errors"] = n_errors;
  summary["n_posts"] = corpus.posts.size();
  summary["n_threads"] = corpus.threads.size();
  summary["n_users_total"] = users_total;
  summary["n_users_retained"] = corpus.timelines.size();
  ordered_json errors = ordered_json::array();
  std::size_t shown = 0;
  for (const auto& e : parsed.errors) {
    if (shown++ >= 20) break;
    errors.push_back("line " + std::to_string(e.line) + ": " + e.message);
  }
  for (const auto& e : built.errors) {
    if (shown++ >= 20) break;
    errors.push_back("line " + std::to_string(e.line) + ": " + e.message);
  }
  summary["errors"] = std::move(errors);
  std::cout << summary.dump(2) << "\n";

  const double rate = n_lines == 0 ? (n_errors ? 1.0 : 0.0)
                                   : static_cast<double>(n_errors) / static_cast<double>(n_lines);
  return rate > opts.max_error_rate ? 2 : 0;
}

int cmd_segment(const CommonOpts& opts) {
  const MoodMap moods = opts.mood_map ? MoodMap::load(*opts.mood_map) : MoodMap::bundled();
  ParseResult parsed = parse_posts_file(opts.input, moods);
  const std::size_t n_lines = parsed.lines;
  BuildResult built = build_corpus(std::move(parsed.posts), moods);
  const std::size_t n_errors = parsed.errors.size() + built.errors.size();
  const double rate = n_lines == 0 ? (n_errors ? 1.0 : 0.0)
                                   : static_cast<double>(n_errors) / static_cast<double>(n_lines);
  if (rate > opts.max_error_rate) {
    std::cerr << "error: input error rate exceeds threshold\n";
    return 2;
  }

  Corpus corpus = std::move(built.corpus);
  if (!opts.no_filter) {
    const FilterConfig filter =
        opts.filter ? FilterConfig::load(*opts.filter) : FilterConfig{};
    corpus = filter_users(corpus, filter);
  }

  const SegmentedCorpus segmented = segment_corpus(corpus, {opts.n_multiplier});
  std::string lines;
  for (const auto& [user_id, bursts] : segmented) {
    for (const Burst& b : bursts) {
      ordered_json j;
      j["user"] = b.user_id;
      j["burst"] = b.index;
      j["first"] = b.first;
      j["last"] = b.last;
      j["start"] = b.start;
      j["end"] = b.end;
      j["size"] = b.size();
      lines += j.dump() + "\n";
    }
  }
  write_text_atomic((std::filesystem::path(opts.out_dir) / "bursts.jsonl").string(), lines);

  const BurstMeta meta = burst_meta(corpus, segmented);
  ordered_json summary;
  summary["n_multiplier"] = opts.n_multiplier;
  summary["n_users"] = meta.n_users;
  summary["n_bursts"] = meta.n_bursts;
  summary["mean_posts_per_burst"] = meta.mean_posts_per_burst;
  summary["median_posts_per_burst"] = meta.median_posts_per_burst;
  summary["mean_span_days"] = meta.mean_span_days;
  summary["mean_bursts_per_user"] = meta.mean_bursts_per_user;
  summary["ratio_inter_intra"] = meta.ratio_inter_intra;
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::vector<double>& n_values) {
  RunConfig cfg = to_run_config(opts);
  cfg.sweep_n = n_values;
  run_sweep(cfg);
  return 0;
}

int cmd_analyze(const CommonOpts& opts, const std::string& ks, int permutations,
                bool no_intermediates) {
  RunConfig cfg = to_run_config(opts);
  cfg.ks_method = ks == "permutation" ? KsMethod::permutation : KsMethod::asymptotic;
  cfg.ks_permutations = permutations;
  cfg.write_intermediates = !no_intermediates;
  const RunReport report = run_analyze(cfg);
  std::cout << "status: " << run_status_name(report.status) << "\n"
            << "users retained: " << report.n_users_retained << "\n"
            << "bursts: " << report.cohort.n_bursts << " (" << report.cohort.n_bursts_with_moc
            << " positive)\n"
            << "report: " << (std::filesystem::path(cfg.out_dir) / "report.json").string()
            << "\n";
  return static_cast<int>(report.status);
}

int cmd_synth(const std::string& config_path, std::optional<std::uint64_t> seed,
              std::optional<std::size_t> users, const std::string& out,
              const std::string& truth_path) {
  GeneratorConfig cfg =
      config_path.empty() ? GeneratorConfig{} : GeneratorConfig::load(config_path);
  if (seed) cfg.seed = *seed;
  if (users) cfg.n_users = *users;
  cfg.validate();

  const SynthResult result = generate_corpus(cfg);
  write_jsonl(result.posts, out);
  if (!truth_path.empty())
    write_text_atomic(truth_path, result.truth.to_json().dump(2) + "\n");

  ordered_json summary;
  summary["n_users"] = cfg.n_users;
  summary["n_posts"] = result.posts.size();
  summary["corpus"] = out;
  if (!truth_path.empty()) summary["truth"] = truth_path;
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_report(const std::string& report_path, const std::string& out_dir) {
  render_report(report_path, out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"burst-level analysis of posting timelines"};
  app.require_subcommand(1);

  CommonOpts ingest_opts, segment_opts, sweep_opts, analyze_opts;

  auto* ingest_cmd = app.add_subcommand("ingest", "parse and validate a corpus");
  add_common(ingest_cmd, ingest_opts, true);

  auto* segment_cmd = app.add_subcommand("segment", "segment timelines into bursts");
  add_common(segment_cmd, segment_opts, true);

  auto* sweep_cmd = app.add_subcommand("sweep", "bursts/month across threshold multipliers");
  add_common(sweep_cmd, sweep_opts, true);
  std::vector<double> sweep_values;
  sweep_cmd->add_option("--values", sweep_values, "explicit multiplier list (default 1..150)");

  auto* analyze_cmd = app.add_subcommand("analyze", "full pipeline with report emission");
  add_common(analyze_cmd, analyze_opts, true);
  std::string ks_method = "asymptotic";
  int permutations = 10000;
  bool no_intermediates = false;
  analyze_cmd->add_option("--ks", ks_method, "p-value method")
      ->check(CLI::IsMember({"asymptotic", "permutation"}));
  analyze_cmd->add_option("--permutations", permutations, "relabelings for permutation p")
      ->check(CLI::PositiveNumber);
  analyze_cmd->add_flag("--no-intermediates", no_intermediates,
                        "skip bursts.jsonl and outcomes.jsonl");

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus with ground truth");
  std::string synth_config, synth_out = "corpus.jsonl", synth_truth;
  std::optional<std::uint64_t> synth_seed;
  std::optional<std::size_t> synth_users;
  synth_cmd->add_option("--config", synth_config, "generator config JSON");
  synth_cmd->add_option("--seed", synth_seed, "generator seed override");
  synth_cmd->add_option("--users", synth_users, "user count override");
  synth_cmd->add_option("--out", synth_out, "output corpus path");
  synth_cmd->add_option("--truth", synth_truth, "ground truth JSON path");

  auto* report_cmd = app.add_subcommand("report", "re-render CSV tables from report.json");
  std::string report_path = "report.json", report_out = ".";
  report_cmd->add_option("--report", report_path, "existing report.json");
  report_cmd->add_option("--out-dir", report_out, "directory for rendered tables");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest_cmd->parsed()) return cmd_ingest(ingest_opts);
    if (segment_cmd->parsed()) return cmd_segment(segment_opts);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts, sweep_values);
    if (analyze_cmd->parsed())
      return cmd_analyze(analyze_opts, ks_method, permutations, no_intermediates);
    if (synth_cmd->parsed())
      return cmd_synth(synth_config, synth_seed, synth_users, synth_out, synth_truth);
    if (report_cmd->parsed()) return cmd_report(report_path, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
