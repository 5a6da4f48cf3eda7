#include "burstlab/segment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "burstlab/kernels.hpp"

namespace burstlab {

double bursts_per_month(std::size_t n_bursts, double active_age_seconds) {
  constexpr double kDay = 86400.0;
  constexpr double kMonth = 30.0 * kDay;
  const double age = std::max(active_age_seconds, kDay);
  return static_cast<double>(n_bursts) / (age / kMonth);
}

std::vector<Burst> segment_bursts(const Corpus& corpus, const UserTimeline& timeline,
                                  const SegmentationConfig& cfg) {
  if (cfg.n_multiplier <= 0.0) throw std::runtime_error("n_multiplier must be > 0");
  if (timeline.posts.empty()) return {};

  const double threshold = cfg.n_multiplier * timeline.median_gap;
  static thread_local std::vector<std::uint32_t> breaks;
  kernels::indices_gt(timeline.gaps, threshold, breaks);

  std::vector<Burst> bursts;
  bursts.reserve(breaks.size() + 1);
  std::uint32_t first = 0;
  auto close = [&](std::uint32_t last) {
    Burst b;
    b.user_id = timeline.user_id;
    b.index = static_cast<int>(bursts.size());
    b.first = first;
    b.last = last;
    b.start = corpus.post(timeline.posts[first]).ts;
    b.end = corpus.post(timeline.posts[last]).ts;
    b.span = static_cast<double>(b.end - b.start);
    bursts.push_back(std::move(b));
  };
  for (std::uint32_t g : breaks) {
    close(g);  // gap g separates post g from post g+1
    first = g + 1;
  }
  close(static_cast<std::uint32_t>(timeline.posts.size() - 1));
  return bursts;
}

SegmentedCorpus segment_corpus(const Corpus& corpus, const SegmentationConfig& cfg) {
  SegmentedCorpus out;
  for (const auto& [uid, tl] : corpus.timelines) out.emplace(uid, segment_bursts(corpus, tl, cfg));
  return out;
}

BurstinessReport burstiness(const UserTimeline& timeline, const std::vector<Burst>& bursts) {
  BurstinessReport r;
  r.user_id = timeline.user_id;
  r.n_bursts = bursts.size();
  r.bursts_per_month = bursts.empty() ? 0.0 : bursts_per_month(bursts.size(), timeline.active_age);
  if (bursts.empty()) return r;

  double intra_sum = 0.0;
  std::size_t intra_n = 0;
  for (const Burst& b : bursts) {
    if (b.last > b.first) {
      intra_sum += kernels::sum(
          std::span<const double>(timeline.gaps).subspan(b.first, b.last - b.first));
      intra_n += b.last - b.first;
    }
  }
  r.mean_intra = intra_n ? intra_sum / static_cast<double>(intra_n) : 0.0;

  if (bursts.size() >= 2) {
    double inter_sum = 0.0;
    for (std::size_t k = 0; k + 1 < bursts.size(); ++k)
      inter_sum += static_cast<double>(bursts[k + 1].start - bursts[k].end);
    r.mean_inter = inter_sum / static_cast<double>(bursts.size() - 1);
    // Defined as 0 for a single burst and clamped so degenerate timelines
    // where intra gaps exceed inter gaps cannot push it negative.
    if (r.mean_inter > 0.0)
      r.burstiness = std::clamp(1.0 - r.mean_intra / r.mean_inter, 0.0, 1.0);
  }
  return r;
}

BurstMeta burst_meta(const Corpus& corpus, const SegmentedCorpus& segmented) {
  BurstMeta m;
  m.n_users = segmented.size();

  std::vector<double> sizes;
  double span_sum = 0.0;
  double intra_sum = 0.0, inter_sum = 0.0;
  std::size_t intra_n = 0, inter_n = 0;

  for (const auto& [uid, bursts] : segmented) {
    auto tl_it = corpus.timelines.find(uid);
    if (tl_it == corpus.timelines.end())
      throw std::runtime_error("burst_meta: unknown user '" + uid + "'");
    const UserTimeline& tl = tl_it->second;
    for (const Burst& b : bursts) {
      sizes.push_back(static_cast<double>(b.size()));
      span_sum += b.span;
      if (b.last > b.first) {
        intra_sum +=
            kernels::sum(std::span<const double>(tl.gaps).subspan(b.first, b.last - b.first));
        intra_n += b.last - b.first;
      }
    }
    for (std::size_t k = 0; k + 1 < bursts.size(); ++k) {
      inter_sum += static_cast<double>(bursts[k + 1].start - bursts[k].end);
      ++inter_n;
    }
  }

  m.n_bursts = sizes.size();
  if (m.n_bursts == 0) return m;  // zeroed summary, n_bursts flags emptiness

  m.mean_posts_per_burst = kernels::sum(sizes) / static_cast<double>(sizes.size());
  m.median_posts_per_burst = median_of(sizes);
  m.mean_span_days = span_sum / static_cast<double>(sizes.size()) / 86400.0;
  m.mean_bursts_per_user =
      m.n_users ? static_cast<double>(m.n_bursts) / static_cast<double>(m.n_users) : 0.0;
  const double mean_intra = intra_n ? intra_sum / static_cast<double>(intra_n) : 0.0;
  const double mean_inter = inter_n ? inter_sum / static_cast<double>(inter_n) : 0.0;
  m.ratio_inter_intra = mean_intra > 0.0 ? mean_inter / mean_intra : 0.0;
  return m;
}

std::vector<SweepPoint> sweep_n(const Corpus& corpus, std::span<const double> n_values) {
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] <= 0.0) throw std::runtime_error("sweep: n values must be positive");
    if (i > 0 && n_values[i] < n_values[i - 1])
      throw std::runtime_error("sweep: n values must be ascending");
  }

  std::vector<SweepPoint> points;
  points.reserve(n_values.size());
  for (double n : n_values) {
    SweepPoint pt;
    pt.n = n;
    std::vector<double> per_user;
    per_user.reserve(corpus.timelines.size());
    for (const auto& [uid, tl] : corpus.timelines) {
      if (tl.posts.empty()) continue;
      const double threshold = n * tl.median_gap;
      const std::size_t n_bursts = kernels::count_gt(tl.gaps, threshold) + 1;
      per_user.push_back(bursts_per_month(n_bursts, tl.active_age));
    }
    if (!per_user.empty()) {
      const double mean = kernels::sum(per_user) / static_cast<double>(per_user.size());
      pt.mean_bursts_per_month = mean;
      if (per_user.size() > 1) {
        double ss = 0.0;
        for (double v : per_user) ss += (v - mean) * (v - mean);
        pt.std_bursts_per_month = std::sqrt(ss / static_cast<double>(per_user.size() - 1));
      }
    }
    points.push_back(pt);
  }
  return points;
}

}  // namespace burstlab
