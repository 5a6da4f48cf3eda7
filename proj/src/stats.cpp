#include "burstlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace burstlab {

double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  constexpr double kPi = 3.14159265358979323846;
  if (lambda < 1.18) {
    const double t = std::exp(-kPi * kPi / (8.0 * lambda * lambda));
    const double cdf = std::sqrt(2.0 * kPi) / lambda *
                       (t + std::pow(t, 9.0) + std::pow(t, 25.0) + std::pow(t, 49.0));
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 128; ++k) {
    const double term = std::exp(-2.0 * static_cast<double>(k) * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double ks_d_sorted(const std::vector<double>& a, const std::vector<double>& b) {
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  return d;
}

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return static_cast<std::uint64_t>(u * static_cast<double>(n));
}

// D statistic for one label assignment over the pooled sorted values; the
// ECDF gap is evaluated once per tie block.
double ks_d_labels(const std::vector<char>& labels, const std::vector<char>& block_end,
                   double n1, double n2) {
  std::size_t ca = 0, cb = 0;
  double d = 0.0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k])
      ++ca;
    else
      ++cb;
    if (block_end[k])
      d = std::max(d, std::abs(static_cast<double>(ca) / n1 - static_cast<double>(cb) / n2));
  }
  return d;
}

}  // namespace

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, KsMethod method,
                       std::uint64_t seed, int permutations) {
  if (a.empty() || b.empty()) throw std::runtime_error("ks_two_sample: empty sample");

  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  KsResult result;
  result.n1 = sa.size();
  result.n2 = sb.size();
  result.method = method;
  result.d_stat = ks_d_sorted(sa, sb);

  const double n1 = static_cast<double>(sa.size());
  const double n2 = static_cast<double>(sb.size());

  if (method == KsMethod::asymptotic) {
    const double ne = n1 * n2 / (n1 + n2);
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * result.d_stat;
    result.p_value = kolmogorov_sf(lambda);
    return result;
  }

  if (permutations < 1) throw std::runtime_error("ks_two_sample: permutations must be >= 1");
  const std::size_t n = sa.size() + sb.size();
  std::vector<double> pooled;
  pooled.reserve(n);
  pooled.insert(pooled.end(), sa.begin(), sa.end());
  pooled.insert(pooled.end(), sb.begin(), sb.end());
  std::sort(pooled.begin(), pooled.end());
  std::vector<char> block_end(n, 0);
  for (std::size_t k = 0; k < n; ++k)
    block_end[k] = (k + 1 == n) || (pooled[k] != pooled[k + 1]);

  std::vector<char> labels(n, 0);
  std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(sa.size()), 1);

  std::mt19937_64 rng(seed);
  const double threshold = result.d_stat - 1e-12;
  std::size_t at_least = 0;
  for (int rep = 0; rep < permutations; ++rep) {
    for (std::size_t k = n - 1; k > 0; --k) {
      const std::size_t r = bounded(rng, k + 1);
      std::swap(labels[k], labels[r]);
    }
    if (ks_d_labels(labels, block_end, n1, n2) >= threshold) ++at_least;
  }
  result.p_value = static_cast<double>(1 + at_least) / static_cast<double>(permutations + 1);
  return result;
}

ComparisonRow compare_groups(const std::string& feature, std::span<const double> pos,
                             std::span<const double> neg, KsMethod method, std::uint64_t seed,
                             int permutations) {
  if (pos.empty())
    throw std::runtime_error("compare_groups(" + feature + "): positive group is empty");
  if (neg.empty())
    throw std::runtime_error("compare_groups(" + feature + "): negative group is empty");
  ComparisonRow row;
  row.feature = feature;
  row.pos_mean = mean_of(pos);
  row.neg_mean = mean_of(neg);
  row.pos_median = median_of({pos.begin(), pos.end()});
  row.neg_median = median_of({neg.begin(), neg.end()});
  row.ks = ks_two_sample(pos, neg, method, seed, permutations);
  return row;
}

CategoryProfile category_profile(const Corpus& corpus, const UserTimeline& timeline,
                                 std::uint32_t first, std::uint32_t last) {
  std::map<std::string, std::size_t> post_counts, reply_counts;
  std::size_t n_posts = 0, n_replies = 0;
  for (std::uint32_t pos = first; pos <= last && pos < timeline.posts.size(); ++pos) {
    const std::uint32_t idx = timeline.posts[pos];
    const Post& p = corpus.post(idx);
    if (p.is_reply()) {
      ++reply_counts[corpus.effective_category(idx)];
      ++n_replies;
    } else {
      ++post_counts[p.category];
      ++n_posts;
    }
  }
  CategoryProfile profile;
  for (const auto& [cat, count] : post_counts)
    profile.post_proportions[cat] = static_cast<double>(count) / static_cast<double>(n_posts);
  for (const auto& [cat, count] : reply_counts)
    profile.reply_proportions[cat] = static_cast<double>(count) / static_cast<double>(n_replies);
  profile.n_categories_posts = post_counts.size();
  profile.n_categories_replies = reply_counts.size();
  return profile;
}

CategoryProfile category_profile(const Corpus& corpus, const UserTimeline& timeline) {
  if (timeline.posts.empty()) return {};
  return category_profile(corpus, timeline, 0, static_cast<std::uint32_t>(timeline.posts.size() - 1));
}

namespace {

// Largest-value key; alphabetical order of std::map makes ties resolve to the
// first key. Reports whether a tie occurred.
std::pair<std::string, bool> argmax_category(const std::map<std::string, double>& props) {
  std::string best;
  double best_val = -1.0;
  bool tie = false;
  for (const auto& [cat, val] : props) {
    if (val > best_val) {
      best = cat;
      best_val = val;
      tie = false;
    } else if (val == best_val) {
      tie = true;
    }
  }
  return {best, tie};
}

}  // namespace

CategorySimilarity category_similarity(const CategoryProfile& profile) {
  CategorySimilarity sim;
  if (profile.post_proportions.empty() || profile.reply_proportions.empty()) return sim;
  sim.available = true;

  double dot = 0.0, norm_p = 0.0, norm_r = 0.0;
  for (const auto& [cat, val] : profile.post_proportions) {
    norm_p += val * val;
    auto it = profile.reply_proportions.find(cat);
    if (it != profile.reply_proportions.end()) dot += val * it->second;
  }
  for (const auto& [cat, val] : profile.reply_proportions) norm_r += val * val;
  const double denom = std::sqrt(norm_p) * std::sqrt(norm_r);
  sim.cosine_distance = std::clamp(1.0 - dot / denom, 0.0, 1.0);

  const auto [top_p, tie_p] = argmax_category(profile.post_proportions);
  const auto [top_r, tie_r] = argmax_category(profile.reply_proportions);
  sim.top_match = top_p == top_r;
  sim.top_tie = tie_p || tie_r;
  return sim;
}

ConditionedMoodChange conditioned_mood_change(const std::string& condition,
                                              std::span<const double> mood_changes,
                                              std::span<const char> mask) {
  if (mood_changes.size() != mask.size())
    throw std::runtime_error("conditioned_mood_change: mask size mismatch");
  ConditionedMoodChange out;
  out.condition = condition;
  double sum_c = 0.0, sum_n = 0.0;
  std::size_t pos_c = 0, pos_n = 0;
  for (std::size_t i = 0; i < mood_changes.size(); ++i) {
    if (mask[i]) {
      ++out.n_conditioned;
      sum_c += mood_changes[i];
      pos_c += mood_changes[i] > 0;
    } else {
      ++out.n_complement;
      sum_n += mood_changes[i];
      pos_n += mood_changes[i] > 0;
    }
  }
  if (!out.n_conditioned)
    throw std::runtime_error("conditioned_mood_change(" + condition +
                             "): conditioned group is empty");
  if (!out.n_complement)
    throw std::runtime_error("conditioned_mood_change(" + condition +
                             "): complement group is empty");
  out.mean_conditioned = sum_c / static_cast<double>(out.n_conditioned);
  out.mean_complement = sum_n / static_cast<double>(out.n_complement);
  out.positive_rate_conditioned =
      static_cast<double>(pos_c) / static_cast<double>(out.n_conditioned);
  out.positive_rate_complement =
      static_cast<double>(pos_n) / static_cast<double>(out.n_complement);
  return out;
}

std::vector<HistogramRow> histogram(std::span<const double> pos, std::span<const double> neg,
                                    int n_bins) {
  if (n_bins < 1) throw std::runtime_error("histogram: n_bins must be >= 1");
  if (pos.empty() && neg.empty()) return {};

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : pos) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (double v : neg) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  if (lo == hi) {
    HistogramRow row{lo, hi, pos.size(), neg.size()};
    return {row};
  }

  std::vector<HistogramRow> rows(static_cast<std::size_t>(n_bins));
  const double width = (hi - lo) / n_bins;
  for (int k = 0; k < n_bins; ++k) {
    rows[static_cast<std::size_t>(k)].lo = lo + width * k;
    rows[static_cast<std::size_t>(k)].hi = lo + width * (k + 1);
  }
  rows.back().hi = hi;
  auto bin_of = [&](double v) {
    const auto k = static_cast<std::size_t>((v - lo) / width);
    return std::min(k, static_cast<std::size_t>(n_bins - 1));
  };
  for (double v : pos) ++rows[bin_of(v)].pos_count;
  for (double v : neg) ++rows[bin_of(v)].neg_count;
  return rows;
}

}  // namespace burstlab
