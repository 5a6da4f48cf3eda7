#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "burstlab/model.hpp"
#include "burstlab/outcomes.hpp"
#include "burstlab/segment.hpp"

using namespace burstlab;

namespace {

struct Spec {
  std::string user;
  Instant ts;
  std::string text;
  std::string mood;    // originals only
  std::string parent;  // non-empty marks a reply
};

Corpus make_corpus(const std::vector<Spec>& specs) {
  std::vector<Post> posts;
  int id = 0;
  for (const Spec& s : specs) {
    Post p;
    p.post_id = "p" + std::to_string(id++);
    p.user_id = s.user;
    p.ts = s.ts;
    p.text = s.text;
    if (s.parent.empty()) {
      p.mood = s.mood;
      p.category = "School";
    } else {
      p.kind = PostKind::reply;
      p.parent_post_id = s.parent;
    }
    posts.push_back(std::move(p));
  }
  BuildResult b = build_corpus(std::move(posts), MoodMap::bundled());
  REQUIRE(b.errors.empty());
  return std::move(b.corpus);
}

Burst whole_timeline_burst(const Corpus& c, const std::string& user) {
  const UserTimeline& tl = c.timelines.at(user);
  Burst b;
  b.user_id = user;
  b.first = 0;
  b.last = static_cast<std::uint32_t>(tl.posts.size() - 1);
  b.start = c.post(tl.posts.front()).ts;
  b.end = c.post(tl.posts.back()).ts;
  b.span = static_cast<double>(b.end - b.start);
  return b;
}

}  // anonymous namespace

TEST_CASE("normalize_for_moc collapses whitespace and case") {
  CHECK(normalize_for_moc("I  Feel\tMUCH better\n now") == "i feel much better now");
  CHECK(normalize_for_moc("  trimmed  ") == "trimmed");
  CHECK(normalize_for_moc("") == "");
}

TEST_CASE("phrase matching by normalized substring") {
  const MocPhraseSet phrases = MocPhraseSet::bundled();
  CHECK(phrases.matches("honestly I feel much better now, thanks all"));
  CHECK(phrases.matches("I   FEEL  MUCH\nBETTER NOW"));
  CHECK(phrases.matches("wow, i had never thought of that"));
  CHECK(!phrases.matches("i feel much worse now"));
  CHECK(!phrases.matches(""));
}

TEST_CASE("re: entries are regexes over normalized text") {
  const MocPhraseSet p({"re:never thought of (that|this)"});
  CHECK(p.matches("I had NEVER thought of THIS"));
  CHECK(p.matches("never thought of that"));
  CHECK(!p.matches("never thought about that"));
}

TEST_CASE("phrase set rejects empty configurations") {
  CHECK_THROWS(MocPhraseSet(std::vector<std::string>{}));
  CHECK_THROWS(MocPhraseSet({"   "}));
}

TEST_CASE("detect_moc returns the first matching own post") {
  const Corpus c = make_corpus({
      {"u", 100, "rough day", "sad", ""},
      {"u", 200, "i feel much better now", "relieved", ""},
      {"u", 300, "i feel much better now again", "happy", ""},
  });
  const Burst b = whole_timeline_burst(c, "u");
  const auto idx = detect_moc(c, c.timelines.at("u"), b, MocPhraseSet::bundled());
  REQUIRE(idx.has_value());
  CHECK(*idx == 1);
}

TEST_CASE("adding phrases never removes a detection") {
  const Corpus c = make_corpus({
      {"u", 100, "stuck on everything", "sad", ""},
      {"u", 200, "i had never thought of that", "calm", ""},
  });
  const Burst b = whole_timeline_burst(c, "u");
  const UserTimeline& tl = c.timelines.at("u");
  std::vector<std::string> base = {"i had never thought of that"};
  const auto before = detect_moc(c, tl, b, MocPhraseSet(base));
  REQUIRE(before.has_value());
  base.push_back("stuck on");
  const auto after = detect_moc(c, tl, b, MocPhraseSet(base));
  REQUIRE(after.has_value());
  CHECK(*after <= *before);  // superset can only match earlier
}

TEST_CASE("mood_change spans first to last mooded original") {
  const Corpus c = make_corpus({
      {"u", 100, "a", "sad", ""},      // group 1
      {"u", 200, "b", "", ""},             // unmooded original, skipped
      {"other", 150, "root", "happy", ""},
      {"u", 300, "c", "", "p2"},           // reply, skipped
      {"u", 400, "d", "ecstatic", ""},     // group 6
  });
  const UserTimeline& tl = c.timelines.at("u");
  const Burst b = whole_timeline_burst(c, "u");
  const MoodChange mc = mood_change(c, tl, b);
  CHECK(mc.valid);
  CHECK(mc.delta == 5);
  CHECK(mc.first_group == 1);
  CHECK(mc.last_group == 6);
}

TEST_CASE("mood_change is antisymmetric under timeline reversal") {
  const Corpus fwd = make_corpus({
      {"u", 100, "a", "angry", ""},
      {"u", 200, "b", "meh", ""},
      {"u", 300, "c", "amused", ""},
  });
  const Corpus rev = make_corpus({
      {"u", 100, "c", "amused", ""},
      {"u", 200, "b", "meh", ""},
      {"u", 300, "a", "angry", ""},
  });
  const MoodChange f = mood_change(fwd, fwd.timelines.at("u"), whole_timeline_burst(fwd, "u"));
  const MoodChange r = mood_change(rev, rev.timelines.at("u"), whole_timeline_burst(rev, "u"));
  CHECK(f.valid);
  CHECK(r.valid);
  CHECK(f.delta == -r.delta);
}

TEST_CASE("fewer than two mooded originals invalidates the change") {
  const Corpus c = make_corpus({
      {"u", 100, "a", "happy", ""},
      {"u", 200, "b", "", ""},
  });
  const MoodChange mc = mood_change(c, c.timelines.at("u"), whole_timeline_burst(c, "u"));
  CHECK(!mc.valid);
  CHECK(mc.delta == 0);
}

TEST_CASE("engagement counts replies to others over all own posts") {
  const Corpus c = make_corpus({
      {"a", 10, "root a", "happy", ""},      // p0, other user's original
      {"u", 100, "my original", "calm", ""}, // p1
      {"u", 200, "reply to a", "", "p0"},    // p2: to another user
      {"u", 300, "note to self", "", "p1"},  // p3: reply under own original
      {"u", 400, "another", "positive", ""},     // p4
  });
  const double e = engagement(c, c.timelines.at("u"), whole_timeline_burst(c, "u"));
  CHECK(e == doctest::Approx(0.25));  // 1 reply-to-other / 4 own posts
}

TEST_CASE("label_burst assembles the full outcome") {
  const Corpus c = make_corpus({
      {"a", 10, "root a", "happy", ""},
      {"u", 100, "first words here", "sad", ""},
      {"u", 200, "ok then", "", "p0"},
      {"u", 300, "i feel much better now", "relieved", ""},
      {"u", 400, "bye bye", "happy", ""},
  });
  const Burst b = whole_timeline_burst(c, "u");
  const BurstOutcome o = label_burst(c, c.timelines.at("u"), b, MocPhraseSet::bundled());
  CHECK(o.moc);
  REQUIRE(o.moc_post_index.has_value());
  CHECK(*o.moc_post_index == 2);
  CHECK(*o.posts_before_moc == 2);
  CHECK(*o.moc_position_frac == doctest::Approx(2.0 / 3.0));
  CHECK(o.mood_valid);
  CHECK(o.mood_change == mood_group_of("happy", c.mood_map) - mood_group_of("sad", c.mood_map));
  CHECK(o.engagement == doctest::Approx(0.25));
  CHECK(!o.starts_on_reply);
  CHECK(!o.ends_on_reply);
  // word counts: 3 + 2 + 5 + 2 over 4 posts
  CHECK(o.mean_word_count == doctest::Approx(3.0));
}

TEST_CASE("negative burst leaves moc fields empty") {
  const Corpus c = make_corpus({
      {"u", 100, "nothing special", "meh", ""},
      {"u", 200, "still nothing", "meh", ""},
  });
  const BurstOutcome o = label_burst(c, c.timelines.at("u"), whole_timeline_burst(c, "u"),
                                     MocPhraseSet::bundled());
  CHECK(!o.moc);
  CHECK(!o.moc_post_index.has_value());
  CHECK(!o.moc_position_frac.has_value());
  CHECK(!o.posts_before_moc.has_value());
}

TEST_CASE("single-post positive burst has position fraction 0") {
  const Corpus c = make_corpus({
      {"u", 100, "i feel much better now", "happy", ""},
  });
  const BurstOutcome o = label_burst(c, c.timelines.at("u"), whole_timeline_burst(c, "u"),
                                     MocPhraseSet::bundled());
  CHECK(o.moc);
  CHECK(*o.moc_position_frac == 0.0);
}

TEST_CASE("split_pre_post_moc partitions the timeline around the first moc post") {
  const Corpus c = make_corpus({
      {"a", 10, "root", "happy", ""},                      // other user
      {"u", 100, "early post", "sad", ""},
      {"u", 200, "same", "", "p0"},                        // reply to other
      {"u", 90000000, "i feel much better now", "calm", ""},
      {"u", 90000100, "later post", "happy", ""},
      {"u", 90000200, "been there", "", "p0"},
  });
  const UserTimeline& tl = c.timelines.at("u");
  const std::vector<Burst> bursts = segment_bursts(c, tl, {75.0});
  REQUIRE(bursts.size() == 2);
  std::vector<BurstOutcome> outcomes;
  for (const Burst& b : bursts) outcomes.push_back(label_burst(c, tl, b, MocPhraseSet::bundled()));
  const PrePostSplit split = split_pre_post_moc(c, tl, bursts, outcomes, LexiconSet::bundled());
  CHECK(split.pre.n_posts + split.post.n_posts + 1 == tl.posts.size());
  CHECK(c.post(tl.posts[split.moc_pos]).text == "i feel much better now");
  CHECK(split.pre.n_posts == 2);
  CHECK(split.post.n_posts == 2);
  CHECK(split.pre.replies_to_others == 1);
  CHECK(split.post.replies_to_others == 1);
  CHECK(split.pre.engagement == doctest::Approx(0.5));
  CHECK(split.pre.ses_given == doctest::Approx(1.0));  // "same" is ses
  CHECK(split.post.ses_given == doctest::Approx(1.0)); // "been there" is ses
}

TEST_CASE("split_pre_post_moc throws without a positive burst") {
  const Corpus c = make_corpus({
      {"u", 100, "plain", "meh", ""},
      {"u", 200, "plainer", "meh", ""},
  });
  const UserTimeline& tl = c.timelines.at("u");
  const std::vector<Burst> bursts = segment_bursts(c, tl, {75.0});
  std::vector<BurstOutcome> outcomes;
  for (const Burst& b : bursts) outcomes.push_back(label_burst(c, tl, b, MocPhraseSet::bundled()));
  CHECK_THROWS_WITH_AS(split_pre_post_moc(c, tl, bursts, outcomes, LexiconSet::bundled()),
                       "no MOC", std::runtime_error);
}

TEST_CASE("label_corpus summary rates") {
  // u1: one burst ending in a moc. u2: one burst, no moc.
  const Corpus c = make_corpus({
      {"other", 5, "root", "happy", ""},                    // p0
      {"u1", 100, "start", "sad", ""},                      // p1, gets a reply
      {"u1", 200, "same", "", "p0"},                        // p2
      {"u2", 150, "hello", "meh", ""},                     // p3, no replies
      {"other", 500, "nice", "", "p1"},                     // p4, reply to u1's original
      {"u1", 90000000, "i had never thought of that", "calm", ""},  // p5
      {"u2", 300, "more", "meh", ""},                      // p6, no replies
  });
  const SegmentedCorpus seg = segment_corpus(c, {75.0});
  // "other" is in the corpus too; restrict expectations to what we know
  const LabeledCorpus labeled = label_corpus(c, seg, MocPhraseSet::bundled());
  const CohortSummary& s = labeled.summary;
  CHECK(s.n_users == 3);
  CHECK(s.n_users_with_moc == 1);
  CHECK(s.pct_users_with_moc == doctest::Approx(100.0 / 3.0));
  CHECK(s.n_bursts_with_moc == 1);
  // originals: root(p0, 1 reply from u1), u1 start(p1, replied by other),
  // u2 p3, u1 p5, u2 p6, other p4 is a reply => 5 originals, 3 unanswered
  CHECK(s.n_originals == 5);
  CHECK(s.pct_zero_reply_posts == doctest::Approx(60.0));
  // u1's burst is p1,p2,p5 and the moc post is last
  CHECK(s.mean_moc_position_frac == doctest::Approx(1.0));
  CHECK(s.mean_posts_before_moc == doctest::Approx(2.0));
  for (const auto& [user, outs] : labeled.outcomes)
    CHECK(outs.size() == seg.at(user).size());
}

TEST_CASE("posts_before_moc equals moc_post_index on synthetic bursts") {
  const Corpus c = make_corpus({
      {"u", 100, "one", "sad", ""},
      {"u", 200, "two", "", ""},
      {"u", 300, "i feel much better now", "calm", ""},
      {"u", 400, "four", "happy", ""},
  });
  const BurstOutcome o = label_burst(c, c.timelines.at("u"), whole_timeline_burst(c, "u"),
                                     MocPhraseSet::bundled());
  REQUIRE(o.moc);
  CHECK(*o.posts_before_moc == *o.moc_post_index);
}

TEST_CASE("shipped phrase file stays in sync with the built-in default") {
  const std::string dir = BURSTLAB_DATA_DIR;
  CHECK(MocPhraseSet::load(dir + "/moc_phrases.json").to_json() ==
        MocPhraseSet::bundled().to_json());
}
