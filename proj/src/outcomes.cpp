#include "burstlab/outcomes.hpp"

#include <fstream>
#include <stdexcept>

namespace burstlab {

using nlohmann::json;

std::string normalize_for_moc(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char raw : text) {
    const unsigned char b = static_cast<unsigned char>(raw);
    const bool ws = b == ' ' || b == '\t' || b == '\n' || b == '\r' || b == '\f' || b == '\v';
    if (ws) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(b >= 'A' && b <= 'Z' ? static_cast<char>(b - 'A' + 'a') : raw);
  }
  return out;
}

MocPhraseSet::MocPhraseSet(std::vector<std::string> phrases) : phrases_(std::move(phrases)) {
  if (phrases_.empty()) throw std::runtime_error("moc phrases: list is empty");
  for (const auto& p : phrases_) {
    if (p.rfind("re:", 0) == 0) {
      regexes_.emplace_back(p.substr(3), std::regex::ECMAScript | std::regex::icase);
    } else {
      std::string needle = normalize_for_moc(p);
      if (needle.empty()) throw std::runtime_error("moc phrases: blank phrase entry");
      needles_.push_back(std::move(needle));
    }
  }
}

MocPhraseSet MocPhraseSet::bundled() {
  return MocPhraseSet({"I feel much better now", "I had never thought of that"});
}

MocPhraseSet MocPhraseSet::from_json(const json& j) {
  const json& arr = j.is_array() ? j : j.at("phrases");
  std::vector<std::string> phrases;
  for (const auto& p : arr) phrases.push_back(p.get<std::string>());
  return MocPhraseSet(std::move(phrases));
}

MocPhraseSet MocPhraseSet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open moc phrases: " + path);
  json j;
  in >> j;
  return from_json(j);
}

json MocPhraseSet::to_json() const { return json(phrases_); }

bool MocPhraseSet::matches(std::string_view text) const {
  const std::string norm = normalize_for_moc(text);
  for (const auto& needle : needles_)
    if (norm.find(needle) != std::string::npos) return true;
  for (const auto& re : regexes_)
    if (std::regex_search(norm, re)) return true;
  return false;
}

std::optional<std::uint32_t> detect_moc(const Corpus& corpus, const UserTimeline& timeline,
                                        const Burst& burst, const MocPhraseSet& phrases) {
  for (std::uint32_t pos = burst.first; pos <= burst.last; ++pos) {
    const Post& p = corpus.post(timeline.posts[pos]);
    if (phrases.matches(p.text)) return pos - burst.first;
  }
  return std::nullopt;
}

MoodChange mood_change(const Corpus& corpus, const UserTimeline& timeline, const Burst& burst) {
  MoodChange change;
  int count = 0;
  for (std::uint32_t pos = burst.first; pos <= burst.last; ++pos) {
    const Post& p = corpus.post(timeline.posts[pos]);
    if (p.kind != PostKind::original || !p.has_mood()) continue;
    const int group = corpus.mood_map.group_of(p.mood);
    if (!change.first_group) change.first_group = group;
    change.last_group = group;
    ++count;
  }
  if (count >= 2) {
    change.delta = *change.last_group - *change.first_group;
    change.valid = true;
  }
  return change;
}

namespace {

// Whether a reply post targets an original authored by someone else.
bool is_reply_to_other(const Corpus& corpus, const Post& p) {
  if (!p.is_reply()) return false;
  auto it = corpus.threads.find(p.parent_post_id);
  return it != corpus.threads.end() && corpus.post(it->second.original).user_id != p.user_id;
}

}  // namespace

double engagement(const Corpus& corpus, const UserTimeline& timeline, const Burst& burst) {
  std::size_t to_others = 0;
  for (std::uint32_t pos = burst.first; pos <= burst.last; ++pos)
    if (is_reply_to_other(corpus, corpus.post(timeline.posts[pos]))) ++to_others;
  return static_cast<double>(to_others) / static_cast<double>(burst.size());
}

BurstOutcome label_burst(const Corpus& corpus, const UserTimeline& timeline, const Burst& burst,
                         const MocPhraseSet& phrases) {
  BurstOutcome out;

  if (auto idx = detect_moc(corpus, timeline, burst, phrases)) {
    out.moc = true;
    out.moc_post_index = *idx;
    out.posts_before_moc = *idx;
    out.moc_position_frac =
        burst.size() > 1 ? static_cast<double>(*idx) / static_cast<double>(burst.size() - 1) : 0.0;
  }

  const MoodChange change = mood_change(corpus, timeline, burst);
  out.mood_change = change.delta;
  out.mood_valid = change.valid;
  out.first_mood_group = change.first_group;
  out.last_mood_group = change.last_group;

  out.engagement = engagement(corpus, timeline, burst);
  out.starts_on_reply = corpus.post(timeline.posts[burst.first]).is_reply();
  out.ends_on_reply = corpus.post(timeline.posts[burst.last]).is_reply();

  double words = 0.0;
  for (std::uint32_t pos = burst.first; pos <= burst.last; ++pos)
    words += static_cast<double>(word_count(corpus.post(timeline.posts[pos]).text));
  out.mean_word_count = words / static_cast<double>(burst.size());
  return out;
}

namespace {

SegmentProfile profile_range(const Corpus& corpus, const UserTimeline& timeline,
                             std::uint32_t first, std::uint32_t count, const LexiconSet& lexicons) {
  SegmentProfile seg;
  seg.n_posts = count;
  std::size_t ses = 0, ces = 0, ns = 0;
  for (std::uint32_t pos = first; pos < first + count; ++pos) {
    const Post& p = corpus.post(timeline.posts[pos]);
    if (!is_reply_to_other(corpus, p)) continue;
    ++seg.replies_to_others;
    const SupportLabels l = lexicons.classify_support(p.text);
    ses += l.ses;
    ces += l.ces;
    ns += l.ns;
  }
  if (count) seg.engagement = static_cast<double>(seg.replies_to_others) / static_cast<double>(count);
  if (seg.replies_to_others) {
    const double n = static_cast<double>(seg.replies_to_others);
    seg.ses_given = static_cast<double>(ses) / n;
    seg.ces_given = static_cast<double>(ces) / n;
    seg.ns_given = static_cast<double>(ns) / n;
  }
  return seg;
}

}  // namespace

PrePostSplit split_pre_post_moc(const Corpus& corpus, const UserTimeline& timeline,
                                const std::vector<Burst>& bursts,
                                const std::vector<BurstOutcome>& outcomes,
                                const LexiconSet& lexicons) {
  if (bursts.size() != outcomes.size())
    throw std::runtime_error("split_pre_post_moc: bursts/outcomes size mismatch");
  for (std::size_t i = 0; i < bursts.size(); ++i) {
    if (!outcomes[i].moc) continue;
    const std::uint32_t moc_pos = bursts[i].first + *outcomes[i].moc_post_index;
    PrePostSplit split;
    split.moc_pos = moc_pos;
    split.pre = profile_range(corpus, timeline, 0, moc_pos, lexicons);
    const auto total = static_cast<std::uint32_t>(timeline.posts.size());
    split.post = profile_range(corpus, timeline, moc_pos + 1, total - moc_pos - 1, lexicons);
    return split;
  }
  throw std::runtime_error("no MOC");
}

LabeledCorpus label_corpus(const Corpus& corpus, const SegmentedCorpus& segmented,
                           const MocPhraseSet& phrases) {
  LabeledCorpus labeled;
  CohortSummary& s = labeled.summary;

  double frac_sum = 0.0, before_sum = 0.0;
  std::size_t start_reply_pos = 0, start_reply_neg = 0;
  std::size_t end_reply_pos = 0, end_reply_neg = 0;
  std::size_t zero_reply = 0;

  for (const auto& [user_id, bursts] : segmented) {
    const UserTimeline& timeline = corpus.timelines.at(user_id);
    auto& user_outcomes = labeled.outcomes[user_id];
    user_outcomes.reserve(bursts.size());

    bool user_has_moc = false;
    for (const Burst& burst : bursts) {
      BurstOutcome out = label_burst(corpus, timeline, burst, phrases);
      if (out.moc) {
        user_has_moc = true;
        ++s.n_bursts_with_moc;
        frac_sum += *out.moc_position_frac;
        before_sum += static_cast<double>(*out.posts_before_moc);
        start_reply_pos += out.starts_on_reply;
        end_reply_pos += out.ends_on_reply;
      } else {
        start_reply_neg += out.starts_on_reply;
        end_reply_neg += out.ends_on_reply;
      }
      user_outcomes.push_back(std::move(out));
    }

    ++s.n_users;
    s.n_bursts += bursts.size();
    if (user_has_moc) ++s.n_users_with_moc;

    for (std::uint32_t idx : timeline.posts) {
      const Post& p = corpus.post(idx);
      if (p.kind != PostKind::original) continue;
      ++s.n_originals;
      auto it = corpus.threads.find(p.post_id);
      bool replied = false;
      if (it != corpus.threads.end()) {
        for (std::uint32_t ridx : it->second.replies) {
          if (corpus.post(ridx).user_id != p.user_id) {
            replied = true;
            break;
          }
        }
      }
      if (!replied) ++zero_reply;
    }
  }

  if (s.n_users) s.pct_users_with_moc = 100.0 * static_cast<double>(s.n_users_with_moc) /
                                        static_cast<double>(s.n_users);
  if (s.n_bursts) s.pct_bursts_with_moc = 100.0 * static_cast<double>(s.n_bursts_with_moc) /
                                          static_cast<double>(s.n_bursts);
  if (s.n_originals)
    s.pct_zero_reply_posts = 100.0 * static_cast<double>(zero_reply) /
                             static_cast<double>(s.n_originals);
  if (s.n_bursts_with_moc) {
    const double n = static_cast<double>(s.n_bursts_with_moc);
    s.mean_moc_position_frac = frac_sum / n;
    s.mean_posts_before_moc = before_sum / n;
    s.start_on_reply_rate_pos = static_cast<double>(start_reply_pos) / n;
    s.end_on_reply_rate_pos = static_cast<double>(end_reply_pos) / n;
  }
  const std::size_t n_neg = s.n_bursts - s.n_bursts_with_moc;
  if (n_neg) {
    s.start_on_reply_rate_neg = static_cast<double>(start_reply_neg) / static_cast<double>(n_neg);
    s.end_on_reply_rate_neg = static_cast<double>(end_reply_neg) / static_cast<double>(n_neg);
  }
  return labeled;
}

}  // namespace burstlab
