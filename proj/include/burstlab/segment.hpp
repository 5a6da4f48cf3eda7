#pragma once
// Timeline segmentation into bursts and breaks, burstiness, burst-level
// meta statistics, and the threshold-multiplier sweep.
//
// A burst is a maximal run of consecutive posts where every gap is at most
// N * (that user's median inter-post gap). The boundary is inclusive: a gap
// exactly equal to the threshold stays inside the burst.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "burstlab/model.hpp"

namespace burstlab {

struct SegmentationConfig {
  double n_multiplier = 75.0;  // must be > 0
};

struct Burst {
  std::string user_id;
  int index = 0;            // ordinal within the user, 0-based
  std::uint32_t first = 0;  // position range within the timeline's post list,
  std::uint32_t last = 0;   // inclusive on both ends
  Instant start = 0;
  Instant end = 0;
  double span = 0.0;  // seconds, end - start

  std::uint32_t size() const { return last - first + 1; }
};

struct BurstinessReport {
  std::string user_id;
  double mean_intra = 0.0;   // seconds; mean gap inside bursts, 0 if no intra gaps
  double mean_inter = 0.0;   // seconds; mean end-to-start gap between bursts
  double burstiness = 0.0;   // 1 - mean_intra/mean_inter, clamped to [0,1]; 0 for one burst
  std::size_t n_bursts = 0;
  double bursts_per_month = 0.0;  // month = 30 days; active age floored at 1 day
};

struct BurstMeta {
  std::size_t n_bursts = 0;
  std::size_t n_users = 0;
  double mean_posts_per_burst = 0.0;
  double median_posts_per_burst = 0.0;
  double mean_span_days = 0.0;
  double mean_bursts_per_user = 0.0;
  double ratio_inter_intra = 0.0;  // pooled mean inter gap / pooled mean intra gap
};

struct SweepPoint {
  double n = 0.0;
  double mean_bursts_per_month = 0.0;
  double std_bursts_per_month = 0.0;  // across users, sample standard deviation
};

using SegmentedCorpus = std::map<std::string, std::vector<Burst>>;

std::vector<Burst> segment_bursts(const Corpus& corpus, const UserTimeline& timeline,
                                  const SegmentationConfig& cfg);
SegmentedCorpus segment_corpus(const Corpus& corpus, const SegmentationConfig& cfg);

BurstinessReport burstiness(const UserTimeline& timeline, const std::vector<Burst>& bursts);

BurstMeta burst_meta(const Corpus& corpus, const SegmentedCorpus& segmented);

// Re-segments every timeline once per multiplier. Values must be positive
// and ascending.
std::vector<SweepPoint> sweep_n(const Corpus& corpus, std::span<const double> n_values);

double bursts_per_month(std::size_t n_bursts, double active_age_seconds);

}  // namespace burstlab
