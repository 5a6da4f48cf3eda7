#pragma once

// Two-sample distribution comparison (Kolmogorov-Smirnov), group comparison
// rows, category-profile similarity, and conditioned mood-change summaries.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "burstlab/model.hpp"

namespace burstlab {

enum class KsMethod { asymptotic, permutation };

struct KsResult {
  double d_stat = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  KsMethod method = KsMethod::asymptotic;
};

// Survival function of the Kolmogorov distribution. Uses the theta-series
// form below 1.18 and the alternating exponential series above it.
double kolmogorov_sf(double lambda);

// Exact D via a tie-aware merged scan of both empirical CDFs. Asymptotic p
// applies the small-sample correction lambda = (sqrt(ne)+0.12+0.11/sqrt(ne))*D
// with ne = n1*n2/(n1+n2). Permutation p shuffles pooled group labels
// `permutations` times: p = (1 + #{D_perm >= D_obs - 1e-12}) / (B + 1).
// Throws when either sample is empty.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b,
                       KsMethod method = KsMethod::asymptotic, std::uint64_t seed = 0,
                       int permutations = 10000);

struct ComparisonRow {
  std::string feature;
  double pos_mean = 0.0;
  double pos_median = 0.0;
  double neg_mean = 0.0;
  double neg_median = 0.0;
  KsResult ks;
};

// Means, medians, and KS over one feature sampled from the positive and
// negative burst groups. Throws naming the group that is empty.
ComparisonRow compare_groups(const std::string& feature, std::span<const double> pos,
                             std::span<const double> neg, KsMethod method = KsMethod::asymptotic,
                             std::uint64_t seed = 0, int permutations = 10000);

struct CategoryProfile {
  std::map<std::string, double> post_proportions;   // over own originals
  std::map<std::string, double> reply_proportions;  // over own replies, thread category
  std::size_t n_categories_posts = 0;
  std::size_t n_categories_replies = 0;
};

struct CategorySimilarity {
  bool available = false;  // needs >= 1 original and >= 1 reply
  double cosine_distance = 0.0;
  bool top_match = false;
  bool top_tie = false;  // an argmax tie was broken alphabetically
};

// Profile over timeline positions [first, last]. Replies take the category of
// the thread's original post.
CategoryProfile category_profile(const Corpus& corpus, const UserTimeline& timeline,
                                 std::uint32_t first, std::uint32_t last);
// Whole-timeline profile.
CategoryProfile category_profile(const Corpus& corpus, const UserTimeline& timeline);

// Distance is 1 - cosine similarity over the union of observed categories.
CategorySimilarity category_similarity(const CategoryProfile& profile);

struct ConditionedMoodChange {
  std::string condition;
  std::size_t n_conditioned = 0;
  std::size_t n_complement = 0;
  double mean_conditioned = 0.0;
  double mean_complement = 0.0;
  double positive_rate_conditioned = 0.0;
  double positive_rate_complement = 0.0;
};

// Mood-change mean and positive-change rate within the mask vs its complement.
// mask[i] != 0 puts sample i in the conditioned group. Throws when a side is
// empty.
ConditionedMoodChange conditioned_mood_change(const std::string& condition,
                                              std::span<const double> mood_changes,
                                              std::span<const char> mask);

struct HistogramRow {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t pos_count = 0;
  std::size_t neg_count = 0;
};

// Equal-width bins spanning the pooled range; degenerate range yields one bin.
std::vector<HistogramRow> histogram(std::span<const double> pos, std::span<const double> neg,
                                    int n_bins = 20);

// Plain sequential mean; 0 for empty input. Used for report cells so an
// independent recomputation from the intermediates is bit-exact.
double mean_of(std::span<const double> values);

}  // namespace burstlab
