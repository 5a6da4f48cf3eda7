#pragma once

// Burst outcome labeling: cognitive-change phrase detection, mood-group change,
// engagement ratio, pre/post splits, and corpus-level summary rates.

#include <cstdint>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "burstlab/lexicon.hpp"
#include "burstlab/model.hpp"
#include "burstlab/segment.hpp"

namespace burstlab {

// Lowercases ASCII letters, collapses whitespace runs to single spaces, trims.
std::string normalize_for_moc(std::string_view text);

// Phrase list matched against a user's own posts. Plain entries are
// case/whitespace-normalized substrings; entries starting with "re:" are ECMA
// regexes applied to the normalized text.
class MocPhraseSet {
 public:
  explicit MocPhraseSet(std::vector<std::string> phrases);

  static MocPhraseSet bundled();
  static MocPhraseSet from_json(const nlohmann::json& j);
  static MocPhraseSet load(const std::string& path);

  const std::vector<std::string>& phrases() const { return phrases_; }
  nlohmann::json to_json() const;

  bool matches(std::string_view text) const;

 private:
  std::vector<std::string> phrases_;
  std::vector<std::string> needles_;
  std::vector<std::regex> regexes_;
};

// Position (0-based, within the burst) of the first own post matching a
// phrase, or nullopt.
std::optional<std::uint32_t> detect_moc(const Corpus& corpus, const UserTimeline& timeline,
                                        const Burst& burst, const MocPhraseSet& phrases);

struct MoodChange {
  int delta = 0;         // last group - first group, in -5..+5
  bool valid = false;    // burst had >= 2 mood-bearing original posts
  std::optional<int> first_group;
  std::optional<int> last_group;
};

// Group shift between the first and last mood-bearing original posts of the
// burst. Fewer than two such posts yields delta 0 with valid=false.
MoodChange mood_change(const Corpus& corpus, const UserTimeline& timeline, const Burst& burst);

// Replies the user left on other users' originals, divided by all of the
// user's posts in the burst. Replies under the user's own originals count in
// the denominator only.
double engagement(const Corpus& corpus, const UserTimeline& timeline, const Burst& burst);

struct BurstOutcome {
  bool moc = false;
  std::optional<std::uint32_t> moc_post_index;    // 0-based within the burst
  std::optional<double> moc_position_frac;        // index/(size-1); 0 for size-1 bursts
  std::optional<std::uint32_t> posts_before_moc;  // equals moc_post_index
  int mood_change = 0;
  bool mood_valid = false;
  std::optional<int> first_mood_group;
  std::optional<int> last_mood_group;
  double engagement = 0.0;
  bool starts_on_reply = false;
  bool ends_on_reply = false;
  double mean_word_count = 0.0;
};

BurstOutcome label_burst(const Corpus& corpus, const UserTimeline& timeline, const Burst& burst,
                         const MocPhraseSet& phrases);

struct SegmentProfile {
  std::size_t n_posts = 0;
  std::size_t replies_to_others = 0;
  double engagement = 0.0;
  // Rates over the segment's replies-to-others; 0 when there are none.
  double ses_given = 0.0;
  double ces_given = 0.0;
  double ns_given = 0.0;
};

struct PrePostSplit {
  SegmentProfile pre;
  SegmentProfile post;
  std::uint32_t moc_pos = 0;  // timeline position of the splitting post
};

// Splits the user's whole timeline at their first cognitive-change post.
// The splitting post belongs to neither segment, so
// pre.n_posts + post.n_posts + 1 == timeline size. Throws "no MOC" when no
// burst of the user is labeled positive.
PrePostSplit split_pre_post_moc(const Corpus& corpus, const UserTimeline& timeline,
                                const std::vector<Burst>& bursts,
                                const std::vector<BurstOutcome>& outcomes,
                                const LexiconSet& lexicons);

struct CohortSummary {
  std::size_t n_users = 0;
  std::size_t n_bursts = 0;
  std::size_t n_users_with_moc = 0;
  std::size_t n_bursts_with_moc = 0;
  std::size_t n_originals = 0;
  double pct_users_with_moc = 0.0;
  double pct_bursts_with_moc = 0.0;
  // Share of originals by cohort users that drew no reply from another user.
  double pct_zero_reply_posts = 0.0;
  // Means over positive bursts only; 0 when there are none.
  double mean_moc_position_frac = 0.0;
  double mean_posts_before_moc = 0.0;
  // Rates split by burst outcome (pos = labeled positive, neg = rest).
  double start_on_reply_rate_pos = 0.0;
  double start_on_reply_rate_neg = 0.0;
  double end_on_reply_rate_pos = 0.0;
  double end_on_reply_rate_neg = 0.0;
};

struct LabeledCorpus {
  // Parallel to the segmentation: outcomes[user][i] labels bursts[user][i].
  std::map<std::string, std::vector<BurstOutcome>> outcomes;
  CohortSummary summary;
};

LabeledCorpus label_corpus(const Corpus& corpus, const SegmentedCorpus& segmented,
                           const MocPhraseSet& phrases);

}  // namespace burstlab
