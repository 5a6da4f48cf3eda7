#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "burstlab/model.hpp"
#include "burstlab/segment.hpp"

using namespace burstlab;

namespace {

// Builds a single-user corpus from raw timestamps.
Corpus corpus_from_ts(std::vector<Instant> ts) {
  std::vector<Post> posts;
  posts.reserve(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    Post p;
    p.post_id = "p" + std::to_string(i);
    p.user_id = "u";
    p.ts = ts[i];
    p.text = "x";
    posts.push_back(std::move(p));
  }
  BuildResult b = build_corpus(std::move(posts), MoodMap::bundled());
  REQUIRE(b.errors.empty());
  return std::move(b.corpus);
}

// Reference segmentation: recompute the threshold from scratch and walk every
// gap with no incremental state.
std::vector<std::pair<std::uint32_t, std::uint32_t>> naive_segment(
    const std::vector<Instant>& ts, double n) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  if (ts.empty()) return out;
  std::vector<Instant> sorted = ts;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> gaps;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    gaps.push_back(static_cast<double>(sorted[i] - sorted[i - 1]));
  double med = 0.0;
  if (!gaps.empty()) {
    std::vector<double> g = gaps;
    std::sort(g.begin(), g.end());
    med = g.size() % 2 ? g[g.size() / 2] : (g[g.size() / 2 - 1] + g[g.size() / 2]) / 2.0;
  }
  const double threshold = n * med;
  std::uint32_t first = 0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (gaps[i] > threshold) {
      out.emplace_back(first, static_cast<std::uint32_t>(i));
      first = static_cast<std::uint32_t>(i + 1);
    }
  }
  out.emplace_back(first, static_cast<std::uint32_t>(sorted.size() - 1));
  return out;
}

std::vector<Instant> random_timeline(std::mt19937_64& rng, std::size_t max_posts) {
  std::uniform_int_distribution<std::size_t> len(1, max_posts);
  std::uniform_int_distribution<Instant> step(0, 5000);
  std::vector<Instant> ts;
  Instant t = 1600000000;
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    ts.push_back(t);
    t += step(rng);  // zero steps make tied timestamps
  }
  return ts;
}

}  // namespace

TEST_CASE("segment_bursts matches the naive reference on random timelines") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mult(0.5, 120.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::vector<Instant> ts = random_timeline(rng, 50);
    const Corpus c = corpus_from_ts(ts);
    const UserTimeline& tl = c.timelines.at("u");
    const double n = mult(rng);
    const std::vector<Burst> got = segment_bursts(c, tl, {n});
    const auto want = naive_segment(ts, n);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].first == want[i].first);
      CHECK(got[i].last == want[i].second);
      CHECK(got[i].index == static_cast<int>(i));
    }
  }
}

TEST_CASE("bursts partition the timeline") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const Corpus c = corpus_from_ts(random_timeline(rng, 60));
    const UserTimeline& tl = c.timelines.at("u");
    const std::vector<Burst> bursts = segment_bursts(c, tl, {10.0});
    REQUIRE(!bursts.empty());
    CHECK(bursts.front().first == 0);
    CHECK(bursts.back().last == tl.posts.size() - 1);
    for (std::size_t i = 1; i < bursts.size(); ++i)
      CHECK(bursts[i].first == bursts[i - 1].last + 1);
    for (const Burst& b : bursts) {
      CHECK(b.first <= b.last);
      CHECK(b.start == c.post(tl.posts[b.first]).ts);
      CHECK(b.end == c.post(tl.posts[b.last]).ts);
      CHECK(b.span == static_cast<double>(b.end - b.start));
    }
  }
}

TEST_CASE("gap exactly at the threshold stays inside the burst") {
  // gaps: 100, 200, 300 -> median 200; n=1.5 -> threshold 300 inclusive
  const Corpus c = corpus_from_ts({0, 100, 300, 600});
  const std::vector<Burst> bursts = segment_bursts(c, c.timelines.at("u"), {1.5});
  CHECK(bursts.size() == 1);
  // nudge the last gap over the threshold
  const Corpus c2 = corpus_from_ts({0, 100, 300, 601});
  const std::vector<Burst> b2 = segment_bursts(c2, c2.timelines.at("u"), {1.5});
  CHECK(b2.size() == 2);
}

TEST_CASE("single-post and empty-gap timelines") {
  const Corpus one = corpus_from_ts({42});
  const std::vector<Burst> b = segment_bursts(one, one.timelines.at("u"), {75.0});
  REQUIRE(b.size() == 1);
  CHECK(b[0].size() == 1);
  CHECK(b[0].span == 0.0);

  // all posts at the same instant: median gap 0, threshold 0, gaps 0 <= 0
  const Corpus tied = corpus_from_ts({5, 5, 5});
  CHECK(segment_bursts(tied, tied.timelines.at("u"), {75.0}).size() == 1);
}

TEST_CASE("coarsening: every n1-burst nests inside one n2-burst for n1 <= n2") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const Corpus c = corpus_from_ts(random_timeline(rng, 50));
    const UserTimeline& tl = c.timelines.at("u");
    std::uniform_real_distribution<double> mult(0.5, 100.0);
    double n1 = mult(rng), n2 = mult(rng);
    if (n1 > n2) std::swap(n1, n2);
    const std::vector<Burst> fine = segment_bursts(c, tl, {n1});
    const std::vector<Burst> coarse = segment_bursts(c, tl, {n2});
    CHECK(coarse.size() <= fine.size());
    for (const Burst& f : fine) {
      bool contained = false;
      for (const Burst& g : coarse)
        if (g.first <= f.first && f.last <= g.last) contained = true;
      CHECK(contained);
    }
  }
}

TEST_CASE("burstiness analytic cases") {
  SUBCASE("single burst is 0") {
    const Corpus c = corpus_from_ts({0, 10, 20});
    const UserTimeline& tl = c.timelines.at("u");
    const auto bursts = segment_bursts(c, tl, {75.0});
    REQUIRE(bursts.size() == 1);
    CHECK(burstiness(tl, bursts).burstiness == 0.0);
  }
  SUBCASE("1 minute intra vs 10 minute inter gives 0.9") {
    // two bursts of three posts, 60 s inside, 600 s between
    const Corpus c = corpus_from_ts({0, 60, 120, 720, 780, 840});
    const UserTimeline& tl = c.timelines.at("u");
    const auto bursts = segment_bursts(c, tl, {2.0});
    REQUIRE(bursts.size() == 2);
    const BurstinessReport r = burstiness(tl, bursts);
    CHECK(r.mean_intra == doctest::Approx(60.0).epsilon(1e-12));
    CHECK(r.mean_inter == doctest::Approx(600.0).epsilon(1e-12));
    CHECK(r.burstiness == doctest::Approx(0.9).epsilon(1e-9));
  }
  SUBCASE("2.69 min intra vs 9.6 d inter") {
    // Scaled by 10 to keep integer seconds: 1614 s inside, 8294400 s between.
    // Burstiness is a ratio, so the scale cancels.
    const Corpus c = corpus_from_ts({0, 1614, 1614 + 8294400, 2 * 1614 + 8294400});
    const UserTimeline& tl = c.timelines.at("u");
    const auto bursts = segment_bursts(c, tl, {75.0});
    REQUIRE(bursts.size() == 2);
    const BurstinessReport r = burstiness(tl, bursts);
    const double want = 1.0 - 2.69 / 13824.0;
    CHECK(r.burstiness == doctest::Approx(want).epsilon(1e-9));
    CHECK(r.burstiness >= 0.99);
  }
}

TEST_CASE("burstiness clamps to [0,1] when intra exceeds inter") {
  // bursts: {0, 1000} and {1500, 2500}: intra 1000, inter 500
  UserTimeline tl;
  tl.user_id = "u";
  tl.posts = {0, 1, 2, 3};
  tl.gaps = {1000.0, 500.0, 1000.0};
  tl.median_gap = 1000.0;
  tl.active_age = 2500.0;
  std::vector<Burst> bursts(2);
  bursts[0] = {"u", 0, 0, 1, 0, 1000, 1000.0};
  bursts[1] = {"u", 1, 2, 3, 1500, 2500, 1000.0};
  const BurstinessReport r = burstiness(tl, bursts);
  CHECK(r.mean_intra == 1000.0);
  CHECK(r.mean_inter == 500.0);
  CHECK(r.burstiness == 0.0);
}

TEST_CASE("bursts_per_month uses 30-day months and floors tiny ages") {
  CHECK(bursts_per_month(3, 30.0 * 86400.0) == doctest::Approx(3.0));
  CHECK(bursts_per_month(3, 60.0 * 86400.0) == doctest::Approx(1.5));
  // under one day of activity counts as one day
  CHECK(bursts_per_month(2, 100.0) == doctest::Approx(2.0 * 30.0));
}

TEST_CASE("sweep is non-increasing in n") {
  std::mt19937_64 rng(14);
  std::vector<Post> posts;
  for (int u = 0; u < 10; ++u) {
    const std::string uid = "u" + std::to_string(u);
    Instant t = 1600000000;
    std::uniform_int_distribution<Instant> step(1, 20000);
    for (int i = 0; i < 80; ++i) {
      Post p;
      p.post_id = uid + "_" + std::to_string(i);
      p.user_id = uid;
      p.ts = t;
      p.text = "x";
      posts.push_back(std::move(p));
      t += step(rng);
    }
  }
  BuildResult b = build_corpus(std::move(posts), MoodMap::bundled());
  std::vector<double> ns;
  for (double n = 1.0; n <= 50.0; n += 1.0) ns.push_back(n);
  const std::vector<SweepPoint> sweep = sweep_n(b.corpus, ns);
  REQUIRE(sweep.size() == ns.size());
  for (std::size_t i = 1; i < sweep.size(); ++i)
    CHECK(sweep[i].mean_bursts_per_month <= sweep[i - 1].mean_bursts_per_month + 1e-12);
}

TEST_CASE("burst_meta aggregates across users") {
  const Corpus c = corpus_from_ts({0, 60, 120, 100000, 100060});
  const SegmentedCorpus seg = segment_corpus(c, {2.0});
  const BurstMeta meta = burst_meta(c, seg);
  CHECK(meta.n_users == 1);
  CHECK(meta.n_bursts == 2);
  CHECK(meta.mean_posts_per_burst == doctest::Approx(2.5));
  CHECK(meta.median_posts_per_burst == doctest::Approx(2.5));
  CHECK(meta.mean_bursts_per_user == doctest::Approx(2.0));
  // intra gaps 60,60,60; inter gap 100000-120
  CHECK(meta.ratio_inter_intra == doctest::Approx((100000.0 - 120.0) / 60.0));
}
