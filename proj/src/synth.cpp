#include "burstlab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

namespace burstlab {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Independent deterministic stream seed per (seed, stream id).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  splitmix64(s);
  s ^= 0xD1B54A32D192ED03ULL * (stream + 1);
  return splitmix64(s);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  std::uint64_t bounded(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n));
  }

  bool bernoulli(double p) { return uniform01() < p; }

  double normal(double mean, double sigma) {
    const double u1 = std::max(uniform01(), 0x1.0p-53);
    const double u2 = uniform01();
    return mean + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // Log-normal with the given arithmetic mean.
  double lognormal_mean(double mean, double sigma) {
    const double mu = std::log(mean) - 0.5 * sigma * sigma;
    return std::exp(normal(mu, sigma));
  }

  std::size_t poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    std::size_t k = 0;
    double prod = uniform01();
    while (prod > limit) {
      ++k;
      prod *= uniform01();
    }
    return k;
  }

  // Failures before first success; mean (1-p)/p.
  std::size_t geometric(double p) {
    if (p >= 1.0) return 0;
    const double u = std::max(uniform01(), 0x1.0p-53);
    return static_cast<std::size_t>(std::log(u) / std::log1p(-p));
  }

  std::size_t categorical(const double* probs, std::size_t n) {
    const double u = uniform01();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return n - 1;
  }

 private:
  std::mt19937_64 eng_;
};

// Filler vocabulary. Deliberately avoids every token that could complete a
// bundled support or change phrase ("same", "been", "feel", "know", "dm",
// "kik", "better", "thought"), so phrase labels appear only where injected.
const char* const kVocab[] = {
    "today",    "tonight", "morning",  "yesterday", "week",     "month",    "school",
    "classes",  "work",    "home",     "family",    "roommate", "people",   "someone",
    "talked",   "walked",  "started",  "stopped",   "trying",   "waiting",  "thinking",
    "writing",  "reading", "sleeping", "eating",    "about",    "really",   "still",
    "just",     "again",   "maybe",    "always",    "never",    "sometimes", "lately",
    "here",     "there",   "things",   "stuff",     "day",      "night",    "time",
    "while",    "long",    "little",   "much",      "going",    "okay",     "right",
    "glad",     "calm",    "hopeful",  "proud",     "excited",  "relieved", "tired",
    "stressed", "lonely",  "worried",  "sad",       "anxious",
};
constexpr std::size_t kVocabSize = std::size(kVocab);

const char* const kMocTexts[] = {"i feel much better now", "i had never thought of that"};
const char* const kSesTexts[] = {"same", "been there", "i know how you feel"};

std::string filler_words(Rng& rng, std::size_t n) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out.push_back(' ');
    out += kVocab[rng.bounded(kVocabSize)];
  }
  return out;
}

struct PostDraft {
  Instant ts = 0;
  bool is_reply = false;
  std::string parent_post_id;  // resolved replies only
  std::string category;
  std::string mood;  // originals only
  std::string text;
  bool anonymous = false;
  bool moc = false, ses = false, ces = false, ns = false;
};

struct UserDraft {
  std::string user_id;
  std::vector<PostDraft> posts;
  std::vector<std::uint32_t> boundaries;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> bursts;
  std::vector<char> moc_burst, ses_burst, ces_burst, ns_burst;
  std::vector<std::uint32_t> moc_index;  // position within burst
  std::vector<char> bumped;
};

std::string make_user_id(std::size_t u) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "u%05zu", u);
  return buf;
}

std::string make_post_id(const std::string& user_id, std::size_t seq) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "-p%06zu", seq);
  return user_id + buf;
}

}  // namespace

GeneratorConfig::GeneratorConfig() : mood_transition(default_mood_transition()) {}

std::array<std::array<double, 6>, 6> GeneratorConfig::default_mood_transition() {
  std::array<std::array<double, 6>, 6> m{};
  for (std::size_t g = 0; g < 6; ++g) {
    const bool lo = g == 0, hi = g == 5;
    m[g][g] = 1.0 - (lo || hi ? 0.02 : 0.04);
    if (!lo) m[g][g - 1] = 0.02;
    if (!hi) m[g][g + 1] = 0.02;
  }
  return m;
}

std::array<std::array<double, 6>, 6> GeneratorConfig::identity_mood_transition() {
  std::array<std::array<double, 6>, 6> m{};
  for (std::size_t g = 0; g < 6; ++g) m[g][g] = 1.0;
  return m;
}

void GeneratorConfig::validate() const {
  auto check_prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::runtime_error(std::string("generator config: ") + name + " must be in [0,1]");
  };
  if (intra_gap_scale <= 0.0 || inter_gap_scale <= 0.0 || gap_sigma <= 0.0)
    throw std::runtime_error("generator config: gap scales and sigma must be positive");
  if (intra_gap_scale >= inter_gap_scale)
    throw std::runtime_error(
        "generator config: infeasible, intra_gap_scale must be below inter_gap_scale");
  if (bursts_per_user_mean < 1.0 || posts_per_burst_mean < 1.0)
    throw std::runtime_error("generator config: burst and post means must be >= 1");
  if (word_count_mean < 1.0)
    throw std::runtime_error("generator config: word_count_mean must be >= 1");
  check_prob(reply_fraction, "reply_fraction");
  check_prob(moc_rate, "moc_rate");
  check_prob(moc_position_frac, "moc_position_frac");
  check_prob(ses_rate, "ses_rate");
  check_prob(ces_rate, "ces_rate");
  check_prob(ns_rate, "ns_rate");
  check_prob(baseline_mood_boost, "baseline_mood_boost");
  check_prob(effect_knobs.persistence_mood_boost, "persistence_mood_boost");
  check_prob(effect_knobs.ces_mood_boost, "ces_mood_boost");
  check_prob(anonymous_rate, "anonymous_rate");
  if (effect_knobs.post_moc_engagement_shift < -1.0 ||
      effect_knobs.post_moc_engagement_shift > 1.0)
    throw std::runtime_error("generator config: post_moc_engagement_shift must be in [-1,1]");
  if (categories.empty()) throw std::runtime_error("generator config: categories is empty");

  double init_sum = 0.0;
  for (double p : initial_mood_dist) {
    if (p < 0.0) throw std::runtime_error("generator config: negative initial mood probability");
    init_sum += p;
  }
  if (std::abs(init_sum - 1.0) > 1e-9)
    throw std::runtime_error("generator config: initial_mood_dist must sum to 1");
  for (const auto& row : mood_transition) {
    double row_sum = 0.0;
    for (double p : row) {
      if (p < 0.0) throw std::runtime_error("generator config: negative transition probability");
      row_sum += p;
    }
    if (std::abs(row_sum - 1.0) > 1e-9)
      throw std::runtime_error("generator config: mood_transition rows must sum to 1");
  }
}

GeneratorConfig GeneratorConfig::from_json(const json& j) {
  GeneratorConfig cfg;
  cfg.n_users = j.value("n_users", cfg.n_users);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.intra_gap_scale = j.value("intra_gap_scale", cfg.intra_gap_scale);
  cfg.inter_gap_scale = j.value("inter_gap_scale", cfg.inter_gap_scale);
  cfg.gap_sigma = j.value("gap_sigma", cfg.gap_sigma);
  cfg.bursts_per_user_mean = j.value("bursts_per_user_mean", cfg.bursts_per_user_mean);
  cfg.posts_per_burst_mean = j.value("posts_per_burst_mean", cfg.posts_per_burst_mean);
  cfg.reply_fraction = j.value("reply_fraction", cfg.reply_fraction);
  if (j.contains("initial_mood_dist")) {
    const auto& arr = j.at("initial_mood_dist");
    if (arr.size() != 6)
      throw std::runtime_error("generator config: initial_mood_dist needs 6 entries");
    for (std::size_t i = 0; i < 6; ++i) cfg.initial_mood_dist[i] = arr[i].get<double>();
  }
  if (j.contains("mood_transition")) {
    const auto& rows = j.at("mood_transition");
    if (rows == "identity") {
      cfg.mood_transition = identity_mood_transition();
    } else {
      if (rows.size() != 6)
        throw std::runtime_error("generator config: mood_transition needs 6 rows");
      for (std::size_t r = 0; r < 6; ++r) {
        if (rows[r].size() != 6)
          throw std::runtime_error("generator config: mood_transition rows need 6 entries");
        for (std::size_t c = 0; c < 6; ++c) cfg.mood_transition[r][c] = rows[r][c].get<double>();
      }
    }
  }
  cfg.moc_rate = j.value("moc_rate", cfg.moc_rate);
  cfg.moc_position_frac = j.value("moc_position_frac", cfg.moc_position_frac);
  cfg.ses_rate = j.value("ses_rate", cfg.ses_rate);
  cfg.ces_rate = j.value("ces_rate", cfg.ces_rate);
  cfg.ns_rate = j.value("ns_rate", cfg.ns_rate);
  cfg.baseline_mood_boost = j.value("baseline_mood_boost", cfg.baseline_mood_boost);
  if (j.contains("effect_knobs")) {
    const auto& k = j.at("effect_knobs");
    cfg.effect_knobs.persistence_mood_boost =
        k.value("persistence_mood_boost", cfg.effect_knobs.persistence_mood_boost);
    cfg.effect_knobs.ces_mood_boost = k.value("ces_mood_boost", cfg.effect_knobs.ces_mood_boost);
    cfg.effect_knobs.post_moc_engagement_shift =
        k.value("post_moc_engagement_shift", cfg.effect_knobs.post_moc_engagement_shift);
  }
  cfg.persistence_threshold = j.value("persistence_threshold", cfg.persistence_threshold);
  cfg.word_count_mean = j.value("word_count_mean", cfg.word_count_mean);
  cfg.anonymous_rate = j.value("anonymous_rate", cfg.anonymous_rate);
  if (j.contains("categories"))
    cfg.categories = j.at("categories").get<std::vector<std::string>>();
  cfg.start_ts = j.value("start_ts", cfg.start_ts);
  cfg.validate();
  return cfg;
}

GeneratorConfig GeneratorConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open generator config: " + path);
  json j;
  in >> j;
  return from_json(j);
}

json GeneratorConfig::to_json() const {
  json j;
  j["n_users"] = n_users;
  j["seed"] = seed;
  j["intra_gap_scale"] = intra_gap_scale;
  j["inter_gap_scale"] = inter_gap_scale;
  j["gap_sigma"] = gap_sigma;
  j["bursts_per_user_mean"] = bursts_per_user_mean;
  j["posts_per_burst_mean"] = posts_per_burst_mean;
  j["reply_fraction"] = reply_fraction;
  j["initial_mood_dist"] = initial_mood_dist;
  j["mood_transition"] = mood_transition;
  j["moc_rate"] = moc_rate;
  j["moc_position_frac"] = moc_position_frac;
  j["ses_rate"] = ses_rate;
  j["ces_rate"] = ces_rate;
  j["ns_rate"] = ns_rate;
  j["baseline_mood_boost"] = baseline_mood_boost;
  j["effect_knobs"] = {{"persistence_mood_boost", effect_knobs.persistence_mood_boost},
                       {"ces_mood_boost", effect_knobs.ces_mood_boost},
                       {"post_moc_engagement_shift", effect_knobs.post_moc_engagement_shift}};
  j["persistence_threshold"] = persistence_threshold;
  j["word_count_mean"] = word_count_mean;
  j["anonymous_rate"] = anonymous_rate;
  j["categories"] = categories;
  j["start_ts"] = start_ts;
  return j;
}

json GroundTruth::to_json() const {
  json j;
  j["boundaries"] = boundaries;
  json ranges = json::object();
  for (const auto& [user, bursts] : burst_ranges) {
    json arr = json::array();
    for (const auto& [first, last] : bursts) arr.push_back(json::array({first, last}));
    ranges[user] = std::move(arr);
  }
  j["burst_ranges"] = std::move(ranges);
  j["moc_posts"] = moc_posts;
  j["ses_posts"] = ses_posts;
  j["ces_posts"] = ces_posts;
  j["ns_posts"] = ns_posts;
  json bumped = json::object();
  for (const auto& [user, flags] : mood_bumped) {
    json arr = json::array();
    for (char f : flags) arr.push_back(static_cast<int>(f));
    bumped[user] = std::move(arr);
  }
  j["mood_bumped"] = std::move(bumped);
  return j;
}

GroundTruth GroundTruth::from_json(const json& j) {
  GroundTruth truth;
  for (const auto& [user, arr] : j.at("boundaries").items())
    truth.boundaries[user] = arr.get<std::vector<std::uint32_t>>();
  for (const auto& [user, arr] : j.at("burst_ranges").items()) {
    auto& bursts = truth.burst_ranges[user];
    for (const auto& pair : arr)
      bursts.emplace_back(pair.at(0).get<std::uint32_t>(), pair.at(1).get<std::uint32_t>());
  }
  truth.moc_posts = j.at("moc_posts").get<std::set<std::string>>();
  truth.ses_posts = j.at("ses_posts").get<std::set<std::string>>();
  truth.ces_posts = j.at("ces_posts").get<std::set<std::string>>();
  truth.ns_posts = j.at("ns_posts").get<std::set<std::string>>();
  for (const auto& [user, arr] : j.at("mood_bumped").items()) {
    auto& flags = truth.mood_bumped[user];
    for (const auto& v : arr) flags.push_back(static_cast<char>(v.get<int>()));
  }
  return truth;
}

SynthResult generate_corpus(const GeneratorConfig& cfg) {
  cfg.validate();
  SynthResult result;
  if (cfg.n_users == 0) return result;

  const double midpoint = std::sqrt(cfg.intra_gap_scale * cfg.inter_gap_scale);
  const MoodMap moods = MoodMap::bundled();

  std::vector<UserDraft> users(cfg.n_users);

  // Pass A: per-user timing skeleton, burst plan, injection flags, post kinds.
  for (std::size_t u = 0; u < cfg.n_users; ++u) {
    UserDraft& ud = users[u];
    ud.user_id = make_user_id(u);
    Rng rng(derive_seed(cfg.seed, u * 4 + 0));

    const std::size_t n_bursts = 1 + rng.poisson(cfg.bursts_per_user_mean - 1.0);
    std::vector<std::size_t> sizes(n_bursts);
    for (auto& s : sizes) s = 1 + rng.geometric(1.0 / cfg.posts_per_burst_mean);

    Instant cursor = cfg.start_ts + static_cast<Instant>(rng.bounded(30 * 86400));
    for (std::size_t b = 0; b < n_bursts; ++b) {
      if (b > 0) {
        double gap;
        do gap = rng.lognormal_mean(cfg.inter_gap_scale, cfg.gap_sigma);
        while (gap <= midpoint);
        cursor += static_cast<Instant>(std::llround(gap));
        ud.boundaries.push_back(static_cast<std::uint32_t>(ud.posts.size() - 1));
      }
      const auto first = static_cast<std::uint32_t>(ud.posts.size());
      for (std::size_t k = 0; k < sizes[b]; ++k) {
        if (k > 0) {
          double gap;
          do gap = rng.lognormal_mean(cfg.intra_gap_scale, cfg.gap_sigma);
          while (gap >= midpoint);
          cursor += std::max<Instant>(1, static_cast<Instant>(std::llround(gap)));
        }
        PostDraft draft;
        draft.ts = cursor;
        ud.posts.push_back(std::move(draft));
      }
      ud.bursts.emplace_back(first, static_cast<std::uint32_t>(ud.posts.size() - 1));
    }

    ud.moc_burst.resize(n_bursts);
    ud.moc_index.resize(n_bursts, 0);
    for (std::size_t b = 0; b < n_bursts; ++b) {
      ud.moc_burst[b] = rng.bernoulli(cfg.moc_rate);
      const double frac = std::clamp(rng.normal(cfg.moc_position_frac, 0.08), 0.0, 1.0);
      ud.moc_index[b] = static_cast<std::uint32_t>(std::llround(frac * (sizes[b] - 1.0)));
    }
    ud.ses_burst.resize(n_bursts);
    ud.ces_burst.resize(n_bursts);
    ud.ns_burst.resize(n_bursts);
    for (std::size_t b = 0; b < n_bursts; ++b) ud.ses_burst[b] = rng.bernoulli(cfg.ses_rate);
    for (std::size_t b = 0; b < n_bursts; ++b) ud.ces_burst[b] = rng.bernoulli(cfg.ces_rate);
    for (std::size_t b = 0; b < n_bursts; ++b) ud.ns_burst[b] = rng.bernoulli(cfg.ns_rate);

    std::size_t first_moc_pos = ud.posts.size();
    for (std::size_t b = 0; b < n_bursts; ++b) {
      if (ud.moc_burst[b]) {
        first_moc_pos = ud.bursts[b].first + ud.moc_index[b];
        break;
      }
    }
    for (std::size_t i = 0; i < ud.posts.size(); ++i) {
      double p = cfg.reply_fraction;
      if (i > first_moc_pos) p += cfg.effect_knobs.post_moc_engagement_shift;
      ud.posts[i].is_reply = rng.bernoulli(std::clamp(p, 0.0, 1.0));
    }
  }

  // Pass B: resolve each reply to an earlier original by another user, or
  // flip it to an original when none exists.
  struct TargetRef {
    Instant ts;
    std::uint32_t user;
    std::uint32_t pos;
  };
  std::vector<TargetRef> targets;
  for (std::size_t u = 0; u < cfg.n_users; ++u)
    for (std::size_t i = 0; i < users[u].posts.size(); ++i)
      if (!users[u].posts[i].is_reply)
        targets.push_back({users[u].posts[i].ts, static_cast<std::uint32_t>(u),
                           static_cast<std::uint32_t>(i)});
  std::sort(targets.begin(), targets.end(), [](const TargetRef& a, const TargetRef& b) {
    return a.ts != b.ts ? a.ts < b.ts : (a.user != b.user ? a.user < b.user : a.pos < b.pos);
  });

  struct ReplyRef {
    Instant ts;
    std::uint32_t user;
    std::uint32_t pos;
  };
  std::vector<ReplyRef> replies;
  for (std::size_t u = 0; u < cfg.n_users; ++u)
    for (std::size_t i = 0; i < users[u].posts.size(); ++i)
      if (users[u].posts[i].is_reply)
        replies.push_back({users[u].posts[i].ts, static_cast<std::uint32_t>(u),
                           static_cast<std::uint32_t>(i)});
  std::sort(replies.begin(), replies.end(), [](const ReplyRef& a, const ReplyRef& b) {
    return a.ts != b.ts ? a.ts < b.ts : (a.user != b.user ? a.user < b.user : a.pos < b.pos);
  });

  Rng link_rng(derive_seed(cfg.seed, 0x9000000000000001ULL));
  for (const ReplyRef& r : replies) {
    const auto upper = std::lower_bound(
        targets.begin(), targets.end(), r.ts,
        [](const TargetRef& t, Instant ts) { return t.ts < ts; });
    const auto n_candidates = static_cast<std::size_t>(upper - targets.begin());
    PostDraft& draft = users[r.user].posts[r.pos];
    bool resolved = false;
    if (n_candidates > 0) {
      for (int attempt = 0; attempt < 32; ++attempt) {
        const TargetRef& t = targets[link_rng.bounded(n_candidates)];
        if (t.user == r.user) continue;
        draft.parent_post_id = make_post_id(make_user_id(t.user), t.pos);
        resolved = true;
        break;
      }
    }
    if (!resolved) draft.is_reply = false;
  }

  // Pass C: categories, moods, texts, injections, effect bumps.
  for (std::size_t u = 0; u < cfg.n_users; ++u) {
    UserDraft& ud = users[u];
    Rng rng(derive_seed(cfg.seed, u * 4 + 2));

    const std::size_t pref_cat = rng.bounded(cfg.categories.size());
    for (PostDraft& p : ud.posts) {
      const std::size_t n_words =
          1 + rng.poisson(cfg.word_count_mean - 1.0);
      p.text = filler_words(rng, n_words);
      if (!p.is_reply) {
        if (cfg.categories.size() == 1 || rng.bernoulli(0.6)) {
          p.category = cfg.categories[pref_cat];
        } else {
          std::size_t other = rng.bounded(cfg.categories.size() - 1);
          if (other >= pref_cat) ++other;
          p.category = cfg.categories[other];
        }
        p.anonymous = rng.bernoulli(cfg.anonymous_rate);
      }
    }

    ud.bumped.assign(ud.bursts.size(), 0);
    for (std::size_t b = 0; b < ud.bursts.size(); ++b) {
      const auto [first, last] = ud.bursts[b];
      const std::size_t burst_size = last - first + 1;

      // Mood walk over the burst's originals.
      std::vector<std::uint32_t> originals;
      std::vector<std::uint32_t> reply_positions;
      for (std::uint32_t pos = first; pos <= last; ++pos) {
        if (ud.posts[pos].is_reply)
          reply_positions.push_back(pos);
        else
          originals.push_back(pos);
      }
      std::size_t group = 0;
      for (std::size_t k = 0; k < originals.size(); ++k) {
        group = k == 0 ? rng.categorical(cfg.initial_mood_dist.data(), 6)
                       : rng.categorical(cfg.mood_transition[group].data(), 6);
        const auto& members = moods.groups()[group].members;
        ud.posts[originals[k]].mood = members[rng.bounded(members.size())];
      }

      if (ud.moc_burst[b]) {
        const std::uint32_t moc_pos = first + ud.moc_index[b];
        PostDraft& p = ud.posts[moc_pos];
        p.text = filler_words(rng, 1 + rng.bounded(3)) + " " +
                 kMocTexts[rng.bounded(std::size(kMocTexts))] + " " +
                 filler_words(rng, 1 + rng.bounded(3));
        p.moc = true;
        // Keep the label injections below off this post so its text survives.
        reply_positions.erase(
            std::remove(reply_positions.begin(), reply_positions.end(), moc_pos),
            reply_positions.end());
      }

      // One injected reply per flagged label; ces takes priority over ses
      // when only one reply exists.
      std::size_t ses_pick = reply_positions.size(), ces_pick = reply_positions.size();
      if (ud.ces_burst[b] && !reply_positions.empty()) ces_pick = rng.bounded(reply_positions.size());
      if (ud.ses_burst[b] && !reply_positions.empty()) {
        ses_pick = rng.bounded(reply_positions.size());
        if (ses_pick == ces_pick && reply_positions.size() > 1) {
          ses_pick = (ses_pick + 1) % reply_positions.size();
        } else if (ses_pick == ces_pick) {
          ses_pick = reply_positions.size();  // ces wins the only reply
        }
      }
      if (ces_pick < reply_positions.size()) {
        PostDraft& p = ud.posts[reply_positions[ces_pick]];
        p.text = std::string(kSesTexts[rng.bounded(std::size(kSesTexts))]) + " " +
                 filler_words(rng, 5 + rng.bounded(5));
        p.ces = true;
      }
      if (ses_pick < reply_positions.size()) {
        PostDraft& p = ud.posts[reply_positions[ses_pick]];
        p.text = kSesTexts[rng.bounded(std::size(kSesTexts))];
        p.ses = true;
      }
      if (ud.ns_burst[b] && !reply_positions.empty()) {
        const std::size_t ns_pick = rng.bounded(reply_positions.size());
        PostDraft& p = ud.posts[reply_positions[ns_pick]];
        if (p.ses || p.ces) {
          p.text += " dm me";
        } else {
          p.text = "dm me " + filler_words(rng, 2 + rng.bounded(3));
        }
        p.ns = true;
      }

      // Effect bump on the burst's final original.
      double p_bump = cfg.baseline_mood_boost;
      const bool ces_actual = ces_pick < reply_positions.size();
      if (ces_actual) p_bump += cfg.effect_knobs.ces_mood_boost;
      if (burst_size >= cfg.persistence_threshold)
        p_bump += cfg.effect_knobs.persistence_mood_boost;
      if (rng.bernoulli(std::min(p_bump, 1.0)) && !originals.empty()) {
        PostDraft& lastp = ud.posts[originals.back()];
        const int g = moods.group_of(lastp.mood);
        if (g < 6) {
          const auto& members = moods.groups()[static_cast<std::size_t>(g)].members;
          lastp.mood = members[rng.bounded(members.size())];
          ud.bumped[b] = 1;
        }
      }
    }
  }

  // Fill reply categories from their thread originals.
  for (std::size_t u = 0; u < cfg.n_users; ++u) {
    for (PostDraft& p : users[u].posts) {
      if (!p.is_reply) continue;
      // parent id encodes user and position: uNNNNN-pNNNNNN
      const std::size_t dash = p.parent_post_id.find('-');
      const std::size_t pu = std::stoul(p.parent_post_id.substr(1, dash - 1));
      const std::size_t pp = std::stoul(p.parent_post_id.substr(dash + 2));
      p.category = users[pu].posts[pp].category;
    }
  }

  // Assemble, record truth, sort globally.
  for (std::size_t u = 0; u < cfg.n_users; ++u) {
    UserDraft& ud = users[u];
    result.truth.boundaries[ud.user_id] = ud.boundaries;
    result.truth.burst_ranges[ud.user_id] = ud.bursts;
    result.truth.mood_bumped[ud.user_id] = ud.bumped;
    for (std::size_t i = 0; i < ud.posts.size(); ++i) {
      PostDraft& d = ud.posts[i];
      Post post;
      post.post_id = make_post_id(ud.user_id, i);
      post.user_id = ud.user_id;
      post.ts = d.ts;
      post.kind = d.is_reply ? PostKind::reply : PostKind::original;
      post.parent_post_id = d.is_reply ? d.parent_post_id : "";
      post.category = std::move(d.category);
      post.mood = d.is_reply ? "" : d.mood;
      post.text = std::move(d.text);
      post.anonymous = d.is_reply ? false : d.anonymous;
      if (d.moc) result.truth.moc_posts.insert(post.post_id);
      if (d.ses) result.truth.ses_posts.insert(post.post_id);
      if (d.ces) result.truth.ces_posts.insert(post.post_id);
      if (d.ns) result.truth.ns_posts.insert(post.post_id);
      result.posts.push_back(std::move(post));
    }
  }
  std::sort(result.posts.begin(), result.posts.end(), [](const Post& a, const Post& b) {
    return a.ts != b.ts ? a.ts < b.ts : a.post_id < b.post_id;
  });
  return result;
}

SegmentationScore evaluate_segmentation(const SegmentedCorpus& predicted,
                                        const GroundTruth& truth) {
  if (predicted.size() != truth.boundaries.size())
    throw std::runtime_error("evaluate_segmentation: user sets differ");

  SegmentationScore score;
  std::size_t exact_hits = 0, n_true_bursts = 0;

  auto truth_it = truth.boundaries.begin();
  for (const auto& [user_id, bursts] : predicted) {
    if (truth_it == truth.boundaries.end() || truth_it->first != user_id)
      throw std::runtime_error("evaluate_segmentation: user sets differ at " + user_id);

    std::vector<std::uint32_t> pred_bounds;
    for (std::size_t b = 0; b + 1 < bursts.size(); ++b) pred_bounds.push_back(bursts[b].last);
    const std::vector<std::uint32_t>& true_bounds = truth_it->second;

    score.n_predicted_boundaries += pred_bounds.size();
    score.n_true_boundaries += true_bounds.size();
    std::vector<std::uint32_t> hits;
    std::set_intersection(pred_bounds.begin(), pred_bounds.end(), true_bounds.begin(),
                          true_bounds.end(), std::back_inserter(hits));
    score.n_boundary_hits += hits.size();

    const auto& true_ranges = truth.burst_ranges.at(user_id);
    n_true_bursts += true_ranges.size();
    std::set<std::pair<std::uint32_t, std::uint32_t>> pred_ranges;
    for (const Burst& b : bursts) pred_ranges.emplace(b.first, b.last);
    for (const auto& range : true_ranges) exact_hits += pred_ranges.count(range);

    ++truth_it;
  }

  if (score.n_predicted_boundaries == 0 && score.n_true_boundaries == 0) {
    score.precision = score.recall = score.f1 = 1.0;
  } else {
    score.precision = score.n_predicted_boundaries
                          ? static_cast<double>(score.n_boundary_hits) /
                                static_cast<double>(score.n_predicted_boundaries)
                          : 0.0;
    score.recall = score.n_true_boundaries
                       ? static_cast<double>(score.n_boundary_hits) /
                             static_cast<double>(score.n_true_boundaries)
                       : 0.0;
    score.f1 = score.precision + score.recall > 0.0
                   ? 2.0 * score.precision * score.recall / (score.precision + score.recall)
                   : 0.0;
  }
  score.exact_burst_match_rate =
      n_true_bursts ? static_cast<double>(exact_hits) / static_cast<double>(n_true_bursts) : 1.0;
  return score;
}

void write_jsonl(const std::vector<Post>& posts, const std::string& path) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write: " + tmp);
    for (const Post& p : posts) out << post_to_jsonl_line(p) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace burstlab
