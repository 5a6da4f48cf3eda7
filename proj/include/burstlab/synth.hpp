#pragma once

// Seeded synthetic corpus generator with recorded ground truth: burst
// boundaries, injected phrase posts, and injected mood effects. Identical
// config + seed yields byte-identical output on any platform.

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "burstlab/model.hpp"
#include "burstlab/segment.hpp"

namespace burstlab {

struct EffectKnobs {
  // Probability bumps applied to a qualifying burst's final original post.
  double persistence_mood_boost = 0.0;  // bursts with >= persistence_threshold posts
  double ces_mood_boost = 0.0;          // bursts whose user gave complex support
  // Added to reply_fraction for every post after the user's first
  // phrase-injected post.
  double post_moc_engagement_shift = 0.0;
};

struct GeneratorConfig {
  std::size_t n_users = 100;
  std::uint64_t seed = 42;

  // Gap draws are log-normal with these means (seconds); samples are
  // rejection-bounded at the geometric midpoint of the two scales so every
  // intra gap is strictly below every inter gap.
  double intra_gap_scale = 161.4;
  double inter_gap_scale = 829440.0;
  double gap_sigma = 0.5;

  double bursts_per_user_mean = 16.6;
  double posts_per_burst_mean = 20.0;
  double reply_fraction = 0.5;

  std::array<double, 6> initial_mood_dist{0.52, 0.17, 0.08, 0.07, 0.10, 0.06};
  std::array<std::array<double, 6>, 6> mood_transition;  // row-stochastic

  // Per-burst injection probabilities.
  double moc_rate = 0.0;
  double moc_position_frac = 0.686;  // mean relative position of injected post
  double ses_rate = 0.0;
  double ces_rate = 0.0;
  double ns_rate = 0.0;

  // Probability that any burst's final original is bumped one group up,
  // independent of the effect knobs.
  double baseline_mood_boost = 0.0;
  EffectKnobs effect_knobs;
  std::size_t persistence_threshold = 15;

  double word_count_mean = 21.0;
  double anonymous_rate = 0.1;
  std::vector<std::string> categories = {"Relationships", "Friends",   "School", "Family",
                                         "Work",          "Wellbeing", "Hobbies", "Other"};
  Instant start_ts = 1609459200;  // 2021-01-01T00:00:00Z

  GeneratorConfig();

  // Interior rows keep 0.96 in place and move 0.02 each way; edge rows fold
  // the blocked direction into staying put.
  static std::array<std::array<double, 6>, 6> default_mood_transition();
  // No movement at all; used when injected bumps must be the only source of
  // mood change.
  static std::array<std::array<double, 6>, 6> identity_mood_transition();

  // Throws on non-stochastic rows, out-of-range rates, non-positive scales,
  // or intra_gap_scale >= inter_gap_scale.
  void validate() const;

  static GeneratorConfig from_json(const nlohmann::json& j);
  static GeneratorConfig load(const std::string& path);
  nlohmann::json to_json() const;
};

struct GroundTruth {
  // Gap index g marks a true burst boundary between posts g and g+1 of the
  // user's chronological timeline.
  std::map<std::string, std::vector<std::uint32_t>> boundaries;
  // Inclusive [first, last] timeline positions per true burst.
  std::map<std::string, std::vector<std::pair<std::uint32_t, std::uint32_t>>> burst_ranges;
  std::set<std::string> moc_posts;
  std::set<std::string> ses_posts;
  std::set<std::string> ces_posts;
  std::set<std::string> ns_posts;
  // Parallel to burst_ranges: whether the burst's last original was bumped.
  std::map<std::string, std::vector<char>> mood_bumped;

  nlohmann::json to_json() const;
  static GroundTruth from_json(const nlohmann::json& j);
};

struct SynthResult {
  std::vector<Post> posts;  // globally sorted by (ts, post_id)
  GroundTruth truth;
};

SynthResult generate_corpus(const GeneratorConfig& cfg);

struct SegmentationScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double exact_burst_match_rate = 0.0;
  std::size_t n_predicted_boundaries = 0;
  std::size_t n_true_boundaries = 0;
  std::size_t n_boundary_hits = 0;
};

// Micro-averaged boundary precision/recall/F1 over all users plus the share
// of true bursts recovered with exact [first, last] extent. A corpus with no
// boundaries anywhere on either side scores 1.0. Throws when the user sets
// differ.
SegmentationScore evaluate_segmentation(const SegmentedCorpus& predicted,
                                        const GroundTruth& truth);

// One post per line in (ts, post_id) order; written to a temp file and
// renamed into place.
void write_jsonl(const std::vector<Post>& posts, const std::string& path);

}  // namespace burstlab
