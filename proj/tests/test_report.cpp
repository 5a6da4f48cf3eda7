#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "burstlab/report.hpp"
#include "burstlab/synth.hpp"

using namespace burstlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("burstlab_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// Small corpus with every injection enabled so all tables are non-empty.
fs::path make_fixture(const TempDir& dir, std::uint64_t seed = 7) {
  GeneratorConfig cfg;
  cfg.n_users = 15;
  cfg.seed = seed;
  cfg.bursts_per_user_mean = 6.0;
  cfg.posts_per_burst_mean = 12.0;
  cfg.moc_rate = 0.35;
  cfg.ses_rate = 0.4;
  cfg.ces_rate = 0.4;
  cfg.ns_rate = 0.2;
  cfg.baseline_mood_boost = 0.05;
  const SynthResult r = generate_corpus(cfg);
  const fs::path path = dir.path / "corpus.jsonl";
  write_jsonl(r.posts, path.string());
  return path;
}

}  // namespace

TEST_CASE("number_repr round-trips doubles exactly") {
  for (double v : {0.0, 1.0, 0.1, 2.0 / 3.0, 1e-17, 123456.789, -0.25}) {
    const std::string s = number_repr(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(number_repr(0.5) == "0.5");
  CHECK(number_repr(3.0) == "3.0");
}

TEST_CASE("fnv1a64 known vectors") {
  CHECK(fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a64_hex("hello") == "a430d84680aabd0b");
}

TEST_CASE("write_text_atomic leaves no temp file and creates directories") {
  TempDir dir("atomic");
  const fs::path target = dir.path / "deep" / "nested" / "file.txt";
  write_text_atomic(target.string(), "payload");
  CHECK(slurp(target) == "payload");
  CHECK(!fs::exists(target.string() + ".tmp"));
}

TEST_CASE("registered features are unique and non-empty") {
  const auto& names = registered_features();
  CHECK(names.size() == 17);
  std::set<std::string> uniq(names.begin(), names.end());
  CHECK(uniq.size() == names.size());
}

TEST_CASE("analyze produces a full report and reruns byte-identically") {
  TempDir dir("analyze");
  const fs::path corpus = make_fixture(dir);

  RunConfig cfg;
  cfg.input_path = corpus.string();
  cfg.out_dir = (dir.path / "out1").string();
  cfg.apply_filter = false;  // keep every synthetic user
  cfg.sweep_n = {25.0, 50.0, 75.0, 100.0};

  const RunReport report = run_analyze(cfg);
  CHECK(report.status == RunStatus::ok);
  CHECK(report.comparison_available);
  CHECK(report.comparison.size() == registered_features().size());
  CHECK(!report.robustness.empty());
  CHECK(report.sweep.size() == 4);
  CHECK(report.config_hash.size() == 16);
  CHECK(report.n_users_retained == 15);

  for (const char* f : {"report.json", "comparison.csv", "robustness.csv", "sweep.csv",
                        "bursts.jsonl", "outcomes.jsonl"})
    CHECK(fs::exists(dir.path / "out1" / f));
  CHECK(fs::exists(dir.path / "out1" / "histograms" / "engagement.csv"));

  cfg.out_dir = (dir.path / "out2").string();
  run_analyze(cfg);
  for (const char* f : {"report.json", "comparison.csv", "robustness.csv", "sweep.csv",
                        "bursts.jsonl", "outcomes.jsonl"})
    CHECK(slurp(dir.path / "out1" / f) == slurp(dir.path / "out2" / f));
}

TEST_CASE("config hash ignores file locations but tracks content") {
  TempDir dir("hash");
  const fs::path corpus = make_fixture(dir);

  RunConfig a;
  a.input_path = corpus.string();
  a.out_dir = (dir.path / "a").string();
  a.apply_filter = false;
  a.sweep_n = {75.0};
  const RunReport ra = run_analyze(a);

  // same corpus bytes from a different path, different out dir
  const fs::path copy = dir.path / "copied_corpus.jsonl";
  fs::copy_file(corpus, copy);
  RunConfig b = a;
  b.input_path = copy.string();
  b.out_dir = (dir.path / "b").string();
  const RunReport rb = run_analyze(b);
  CHECK(ra.config_hash == rb.config_hash);

  RunConfig c = a;
  c.out_dir = (dir.path / "c").string();
  c.seed = 1;
  const RunReport rc = run_analyze(c);
  CHECK(ra.config_hash != rc.config_hash);
}

TEST_CASE("analyze flags an over-threshold error rate with exit-style status") {
  TempDir dir("badinput");
  const fs::path bad = dir.path / "bad.jsonl";
  std::ofstream(bad) << "this is not json\n{\"post_id\":\"x\"}\n";
  RunConfig cfg;
  cfg.input_path = bad.string();
  cfg.out_dir = (dir.path / "out").string();
  const RunReport report = run_analyze(cfg);
  CHECK(report.status == RunStatus::validation_errors);
  CHECK(static_cast<int>(report.status) == 2);
  CHECK(!report.notices.empty());
  CHECK(fs::exists(dir.path / "out" / "report.json"));
}

TEST_CASE("analyze without positive bursts omits the comparison") {
  TempDir dir("nopos");
  GeneratorConfig gen;
  gen.n_users = 6;
  gen.seed = 31;
  gen.moc_rate = 0.0;  // nothing to compare against
  const SynthResult r = generate_corpus(gen);
  const fs::path corpus = dir.path / "corpus.jsonl";
  write_jsonl(r.posts, corpus.string());

  RunConfig cfg;
  cfg.input_path = corpus.string();
  cfg.out_dir = (dir.path / "out").string();
  cfg.apply_filter = false;
  cfg.sweep_n = {75.0};
  const RunReport report = run_analyze(cfg);
  CHECK(report.status == RunStatus::empty_group);
  CHECK(static_cast<int>(report.status) == 3);
  CHECK(!report.comparison_available);
  CHECK(report.comparison.empty());
  CHECK(fs::exists(dir.path / "out" / "report.json"));
  CHECK(!fs::exists(dir.path / "out" / "comparison.csv"));
}

TEST_CASE("render_report rebuilds the csv tables from report.json") {
  TempDir dir("render");
  const fs::path corpus = make_fixture(dir);
  RunConfig cfg;
  cfg.input_path = corpus.string();
  cfg.out_dir = (dir.path / "out").string();
  cfg.apply_filter = false;
  cfg.sweep_n = {50.0, 75.0};
  run_analyze(cfg);

  const fs::path rendered = dir.path / "rendered";
  render_report((dir.path / "out" / "report.json").string(), rendered.string());
  for (const char* f : {"comparison.csv", "robustness.csv", "sweep.csv"})
    CHECK(slurp(dir.path / "out" / f) == slurp(rendered / f));
}

TEST_CASE("csv builders escape nothing because cells are numeric or plain names") {
  ComparisonRow row;
  row.feature = "engagement";
  row.pos_mean = 0.5;
  row.pos_median = 0.5;
  row.neg_mean = 0.25;
  row.neg_median = 0.25;
  row.ks = {0.25, 0.125, 10, 20, KsMethod::asymptotic};
  const std::string csv = comparison_csv({row});
  CHECK(csv.find("feature,pos_mean,pos_median,neg_mean,neg_median,d_stat,p_value,n_pos,n_neg") ==
        0);
  CHECK(csv.find("engagement,0.5,0.5,0.25,0.25,0.25,0.125,10,20") != std::string::npos);
}

TEST_CASE("run_sweep writes a non-increasing sweep csv") {
  TempDir dir("sweep");
  const fs::path corpus = make_fixture(dir);
  RunConfig cfg;
  cfg.input_path = corpus.string();
  cfg.out_dir = (dir.path / "out").string();
  cfg.apply_filter = false;
  cfg.sweep_n = {1, 5, 10, 25, 50, 75, 100};
  const std::vector<SweepPoint> sweep = run_sweep(cfg);
  REQUIRE(sweep.size() == 7);
  for (std::size_t i = 1; i < sweep.size(); ++i)
    CHECK(sweep[i].mean_bursts_per_month <= sweep[i - 1].mean_bursts_per_month + 1e-12);
  CHECK(fs::exists(dir.path / "out" / "sweep.csv"));
}

TEST_CASE("cli binary end-to-end smoke") {
#ifndef BURSTLAB_CLI_PATH
  return;  // binary location unknown; covered by the acceptance suite
#else
  const char* cli = BURSTLAB_CLI_PATH;
  if (!fs::exists(cli)) return;
  TempDir dir("cli");
  const fs::path corpus = make_fixture(dir);
  const std::string cmd = std::string("\"") + cli + "\" analyze --input " + corpus.string() +
                          " --out-dir " + (dir.path / "out").string() + " --no-filter" +
                          " > " + (dir.path / "stdout.txt").string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  CHECK(rc == 0);
  CHECK(fs::exists(dir.path / "out" / "report.json"));
#endif
}
