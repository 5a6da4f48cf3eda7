#pragma once

// End-to-end analysis runs: ingest, filter, segment, label, classify,
// compare, and deterministic report emission.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "burstlab/lexicon.hpp"
#include "burstlab/model.hpp"
#include "burstlab/outcomes.hpp"
#include "burstlab/segment.hpp"
#include "burstlab/stats.hpp"

namespace burstlab {

const char* version();

struct RunConfig {
  std::string input_path;
  std::string out_dir;
  double n_multiplier = 75.0;
  bool apply_filter = true;
  FilterConfig filter;
  std::optional<std::string> lexicon_path;      // bundled when unset
  std::optional<std::string> moc_phrases_path;  // bundled when unset
  std::optional<std::string> mood_map_path;     // bundled when unset
  std::vector<std::string> features;            // empty = every registered feature
  std::vector<double> sweep_n;                  // empty = 1..150
  bool write_csv = true;
  bool write_json = true;
  bool write_intermediates = true;
  KsMethod ks_method = KsMethod::asymptotic;
  int ks_permutations = 10000;
  double max_error_rate = 0.0;  // tolerated share of bad input lines
  std::uint64_t seed = 0;
  int histogram_bins = 20;

  // Canonical form used for the config hash: resolved lexicon/phrase/mood-map
  // contents and all knobs, but no filesystem paths, so identical inputs
  // hash identically wherever they live.
  nlohmann::ordered_json canonical_json(const LexiconSet& lexicons, const MocPhraseSet& phrases,
                                        const MoodMap& moods) const;
};

enum class RunStatus { ok = 0, validation_errors = 2, empty_group = 3 };

const char* run_status_name(RunStatus status);

struct RunReport {
  RunStatus status = RunStatus::ok;
  std::vector<std::string> notices;

  std::size_t n_lines = 0;
  std::size_t n_errors = 0;
  std::size_t n_posts = 0;
  std::size_t n_users_total = 0;
  std::size_t n_users_retained = 0;
  std::size_t n_posts_retained = 0;
  double active_age_days_mean = 0.0;
  double active_age_days_median = 0.0;

  BurstMeta burst_meta;
  double mean_burstiness = 0.0;
  CohortSummary cohort;
  double moc_rate_topmatch = 0.0;     // P(positive burst | top categories match)
  double moc_rate_no_topmatch = 0.0;  // P(positive burst | they differ)

  bool comparison_available = false;
  std::vector<ComparisonRow> comparison;
  std::vector<ConditionedMoodChange> robustness;
  std::vector<std::string> robustness_skipped;
  std::vector<SweepPoint> sweep;

  std::string config_hash;
  nlohmann::ordered_json to_json() const;  // includes every table
};

// Feature names accepted in RunConfig::features, in table order.
const std::vector<std::string>& registered_features();

// Full pipeline; writes report.json plus any configured CSVs and
// intermediates into cfg.out_dir. Files land via temp + rename.
RunReport run_analyze(const RunConfig& cfg);

// Segmentation sweep only; writes sweep.csv into cfg.out_dir.
std::vector<SweepPoint> run_sweep(const RunConfig& cfg);

// Rebuilds the CSV table files from an existing report.json.
void render_report(const std::string& report_json_path, const std::string& out_dir);

std::string fnv1a64_hex(std::string_view bytes);
void write_text_atomic(const std::string& path, const std::string& content);

// Shortest round-trip decimal form, shared by every CSV cell and JSON value.
std::string number_repr(double v);

std::string comparison_csv(const std::vector<ComparisonRow>& rows);
std::string sweep_csv(const std::vector<SweepPoint>& points);
std::string robustness_csv(const std::vector<ConditionedMoodChange>& rows);
std::string histogram_csv(const std::vector<HistogramRow>& rows);

}  // namespace burstlab
