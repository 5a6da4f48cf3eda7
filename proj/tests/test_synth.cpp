#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "burstlab/lexicon.hpp"
#include "burstlab/model.hpp"
#include "burstlab/outcomes.hpp"
#include "burstlab/segment.hpp"
#include "burstlab/synth.hpp"

using namespace burstlab;

namespace {

std::string render_jsonl(const std::vector<Post>& posts) {
  std::string out;
  for (const Post& p : posts) out += post_to_jsonl_line(p) + "\n";
  return out;
}

}  // namespace

TEST_CASE("same config and seed reproduce the corpus byte for byte") {
  GeneratorConfig cfg;
  cfg.n_users = 8;
  cfg.seed = 1234;
  cfg.moc_rate = 0.3;
  cfg.ses_rate = 0.3;
  cfg.ces_rate = 0.3;
  cfg.ns_rate = 0.2;
  const SynthResult a = generate_corpus(cfg);
  const SynthResult b = generate_corpus(cfg);
  CHECK(render_jsonl(a.posts) == render_jsonl(b.posts));
  CHECK(a.truth.to_json() == b.truth.to_json());

  cfg.seed = 1235;
  const SynthResult c = generate_corpus(cfg);
  CHECK(render_jsonl(a.posts) != render_jsonl(c.posts));
}

TEST_CASE("generated posts parse and build with zero errors") {
  GeneratorConfig cfg;
  cfg.n_users = 6;
  cfg.seed = 5;
  cfg.moc_rate = 0.4;
  cfg.ses_rate = 0.4;
  cfg.ces_rate = 0.4;
  cfg.ns_rate = 0.3;
  const SynthResult r = generate_corpus(cfg);
  std::istringstream in(render_jsonl(r.posts));
  ParseResult parsed = parse_posts(in, MoodMap::bundled());
  CHECK(parsed.errors.empty());
  CHECK(parsed.posts.size() == r.posts.size());
  BuildResult built = build_corpus(std::move(parsed.posts), MoodMap::bundled());
  CHECK(built.errors.empty());
  CHECK(built.corpus.timelines.size() == cfg.n_users);
}

TEST_CASE("ground truth boundaries partition each timeline") {
  GeneratorConfig cfg;
  cfg.n_users = 10;
  cfg.seed = 77;
  const SynthResult r = generate_corpus(cfg);
  BuildResult built = build_corpus(r.posts, MoodMap::bundled());
  for (const auto& [user, ranges] : r.truth.burst_ranges) {
    const UserTimeline& tl = built.corpus.timelines.at(user);
    REQUIRE(!ranges.empty());
    CHECK(ranges.front().first == 0);
    CHECK(ranges.back().second == tl.posts.size() - 1);
    for (std::size_t i = 1; i < ranges.size(); ++i)
      CHECK(ranges[i].first == ranges[i - 1].second + 1);
    const auto& bounds = r.truth.boundaries.at(user);
    REQUIRE(bounds.size() == ranges.size() - 1);
    for (std::size_t i = 0; i + 1 < ranges.size(); ++i)
      CHECK(bounds[i] == ranges[i].second);
  }
}

TEST_CASE("intra gaps stay below inter gaps by construction") {
  GeneratorConfig cfg;
  cfg.n_users = 10;
  cfg.seed = 8;
  const SynthResult r = generate_corpus(cfg);
  BuildResult built = build_corpus(r.posts, MoodMap::bundled());
  double max_intra = 0.0, min_inter = 1e18;
  for (const auto& [user, ranges] : r.truth.burst_ranges) {
    const UserTimeline& tl = built.corpus.timelines.at(user);
    const std::set<std::uint32_t> bounds(r.truth.boundaries.at(user).begin(),
                                         r.truth.boundaries.at(user).end());
    for (std::size_t g = 0; g < tl.gaps.size(); ++g) {
      if (bounds.count(static_cast<std::uint32_t>(g)))
        min_inter = std::min(min_inter, tl.gaps[g]);
      else
        max_intra = std::max(max_intra, tl.gaps[g]);
    }
  }
  CHECK(max_intra < min_inter);
}

TEST_CASE("gap samples center on the configured scales") {
  GeneratorConfig cfg;
  cfg.n_users = 100;
  cfg.seed = 42;
  const SynthResult r = generate_corpus(cfg);
  BuildResult built = build_corpus(r.posts, MoodMap::bundled());
  double intra_sum = 0.0, inter_sum = 0.0;
  std::size_t intra_n = 0, inter_n = 0;
  for (const auto& [user, ranges] : r.truth.burst_ranges) {
    const UserTimeline& tl = built.corpus.timelines.at(user);
    const std::set<std::uint32_t> bounds(r.truth.boundaries.at(user).begin(),
                                         r.truth.boundaries.at(user).end());
    for (std::size_t g = 0; g < tl.gaps.size(); ++g) {
      if (bounds.count(static_cast<std::uint32_t>(g))) {
        inter_sum += tl.gaps[g];
        ++inter_n;
      } else {
        intra_sum += tl.gaps[g];
        ++intra_n;
      }
    }
  }
  REQUIRE(intra_n > 1000);
  REQUIRE(inter_n > 500);
  CHECK(intra_sum / intra_n == doctest::Approx(cfg.intra_gap_scale).epsilon(0.15));
  CHECK(inter_sum / inter_n == doctest::Approx(cfg.inter_gap_scale).epsilon(0.15));
}

TEST_CASE("injected phrase posts really carry their labels") {
  GeneratorConfig cfg;
  cfg.n_users = 12;
  cfg.seed = 99;
  cfg.moc_rate = 0.5;
  cfg.ses_rate = 0.5;
  cfg.ces_rate = 0.5;
  cfg.ns_rate = 0.3;
  const SynthResult r = generate_corpus(cfg);
  CHECK(!r.truth.moc_posts.empty());
  CHECK(!r.truth.ses_posts.empty());
  CHECK(!r.truth.ces_posts.empty());
  CHECK(!r.truth.ns_posts.empty());

  const MocPhraseSet phrases = MocPhraseSet::bundled();
  const LexiconSet lex = LexiconSet::bundled();
  for (const Post& p : r.posts) {
    const SupportLabels l = classify_support(p.text, lex);
    CHECK(phrases.matches(p.text) == (r.truth.moc_posts.count(p.post_id) > 0));
    CHECK(l.ses == (r.truth.ses_posts.count(p.post_id) > 0));
    CHECK(l.ces == (r.truth.ces_posts.count(p.post_id) > 0));
    CHECK(l.ns == (r.truth.ns_posts.count(p.post_id) > 0));
  }
}

TEST_CASE("empty and degenerate configs") {
  GeneratorConfig cfg;
  cfg.n_users = 0;
  const SynthResult r = generate_corpus(cfg);
  CHECK(r.posts.empty());
  CHECK(r.truth.burst_ranges.empty());

  GeneratorConfig bad;
  bad.intra_gap_scale = 1000.0;
  bad.inter_gap_scale = 500.0;
  CHECK_THROWS(bad.validate());

  GeneratorConfig badrow;
  badrow.mood_transition[2][0] = 0.5;  // row no longer sums to 1
  CHECK_THROWS(badrow.validate());

  GeneratorConfig badrate;
  badrate.moc_rate = 1.5;
  CHECK_THROWS(badrate.validate());
}

TEST_CASE("ground truth json round-trip") {
  GeneratorConfig cfg;
  cfg.n_users = 5;
  cfg.seed = 3;
  cfg.moc_rate = 0.5;
  cfg.ses_rate = 0.5;
  const SynthResult r = generate_corpus(cfg);
  const GroundTruth back = GroundTruth::from_json(r.truth.to_json());
  CHECK(back.boundaries == r.truth.boundaries);
  CHECK(back.burst_ranges == r.truth.burst_ranges);
  CHECK(back.moc_posts == r.truth.moc_posts);
  CHECK(back.ses_posts == r.truth.ses_posts);
  CHECK(back.ces_posts == r.truth.ces_posts);
  CHECK(back.ns_posts == r.truth.ns_posts);
  CHECK(back.mood_bumped == r.truth.mood_bumped);
}

TEST_CASE("generator config json round-trip and identity transition") {
  GeneratorConfig cfg;
  cfg.n_users = 3;
  cfg.seed = 9;
  cfg.moc_rate = 0.25;
  cfg.mood_transition = GeneratorConfig::identity_mood_transition();
  const GeneratorConfig back = GeneratorConfig::from_json(cfg.to_json());
  CHECK(back.n_users == cfg.n_users);
  CHECK(back.seed == cfg.seed);
  CHECK(back.moc_rate == cfg.moc_rate);
  CHECK(back.mood_transition == cfg.mood_transition);
  const SynthResult a = generate_corpus(cfg);
  const SynthResult b = generate_corpus(back);
  CHECK(render_jsonl(a.posts) == render_jsonl(b.posts));

  nlohmann::json j = cfg.to_json();
  j["mood_transition"] = "identity";
  CHECK(GeneratorConfig::from_json(j).mood_transition ==
        GeneratorConfig::identity_mood_transition());
}

TEST_CASE("evaluate_segmentation scores a perfect and a broken prediction") {
  GeneratorConfig cfg;
  cfg.n_users = 10;
  cfg.seed = 21;
  const SynthResult r = generate_corpus(cfg);
  BuildResult built = build_corpus(r.posts, MoodMap::bundled());
  const SegmentedCorpus good = segment_corpus(built.corpus, {75.0});
  const SegmentationScore s = evaluate_segmentation(good, r.truth);
  CHECK(s.f1 == doctest::Approx(1.0));
  CHECK(s.exact_burst_match_rate == doctest::Approx(1.0));

  // Over-segmenting at n=0.01 slashes precision but keeps recall high.
  const SegmentedCorpus shattered = segment_corpus(built.corpus, {0.01});
  const SegmentationScore s2 = evaluate_segmentation(shattered, r.truth);
  CHECK(s2.recall > 0.9);
  CHECK(s2.precision < s.precision);
  CHECK(s2.f1 < 1.0);

  SegmentedCorpus missing = good;
  missing.erase(missing.begin());
  CHECK_THROWS(evaluate_segmentation(missing, r.truth));
}

TEST_CASE("write_jsonl emits one parseable line per post atomically") {
  GeneratorConfig cfg;
  cfg.n_users = 3;
  cfg.seed = 2;
  const SynthResult r = generate_corpus(cfg);
  const std::string path = "synth_test_tmp.jsonl";
  write_jsonl(r.posts, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  CHECK(n == r.posts.size());
  in.close();
  std::remove(path.c_str());
  CHECK(!std::filesystem::exists(path + ".tmp"));
}
