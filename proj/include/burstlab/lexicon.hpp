#pragma once
// Phrase-lexicon classification of reply text into support types, and
// keyword-lexicon affect scoring.
//
// Support labels:
//   SES - an emotional-support phrase with little or no surrounding text
//   CES - the same phrases with substantial added context
//   NS  - phrases routing support off-thread ("DM me", ...)
// SES and CES are mutually exclusive; NS can co-occur with either.

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "burstlab/model.hpp"
#include "burstlab/segment.hpp"

namespace burstlab {

struct SupportLabels {
  bool ses = false;
  bool ces = false;
  bool ns = false;
  bool none() const { return !ses && !ces && !ns; }
};

struct AffectScores {
  double pos = 0.0;  // percent of tokens matching the positive list, 0..100
  double neg = 0.0;
};

class LexiconSet {
 public:
  // Tiny default phrase lists plus a ~200-word-per-polarity affect lexicon.
  static LexiconSet bundled();
  static LexiconSet from_json(const nlohmann::json& j);
  static LexiconSet load(const std::string& path);
  LexiconSet(std::vector<std::string> ses_phrases, std::vector<std::string> ns_phrases,
             int ces_context_min_tokens, std::vector<std::string> affect_pos,
             std::vector<std::string> affect_neg);

  const std::vector<std::string>& ses_phrases() const { return ses_phrases_; }
  const std::vector<std::string>& ns_phrases() const { return ns_phrases_; }
  int ces_context_min_tokens() const { return ces_context_min_tokens_; }
  const std::vector<std::string>& affect_pos() const { return affect_pos_; }
  const std::vector<std::string>& affect_neg() const { return affect_neg_; }
  nlohmann::json to_json() const;

  SupportLabels classify_support(std::string_view text) const;
  AffectScores affect_scores(std::string_view text) const;

 private:
  struct AffectMatcher {
    std::unordered_set<std::string> exact;
    std::vector<std::string> prefixes;  // from trailing-'*' entries
    bool matches(const std::string& token) const;
  };

  std::vector<std::string> ses_phrases_;
  std::vector<std::string> ns_phrases_;
  int ces_context_min_tokens_ = 5;
  std::vector<std::string> affect_pos_;
  std::vector<std::string> affect_neg_;

  std::vector<std::vector<std::string>> ses_compiled_;
  std::vector<std::vector<std::string>> ns_compiled_;
  AffectMatcher pos_matcher_;
  AffectMatcher neg_matcher_;
  void compile();
};

SupportLabels classify_support(std::string_view text, const LexiconSet& lexicons);
AffectScores affect_scores(std::string_view text, const LexiconSet& lexicons);

struct BurstSupportProfile {
  // Fractions of the user's replies to others inside the burst.
  double ses_given = 0.0, ces_given = 0.0, ns_given = 0.0;
  // Fractions of others' replies to the user's originals posted inside the
  // burst (replies arriving after the burst still count toward it).
  double ses_received = 0.0, ces_received = 0.0, ns_received = 0.0;
  std::size_t n_given = 0;     // replies the user left on others' originals
  std::size_t n_received = 0;  // others' replies to the user's originals
  AffectScores affect_own;       // mean over the user's own posts in the burst
  AffectScores affect_received;  // mean over the received replies
};

BurstSupportProfile burst_support_profile(const Corpus& corpus, const UserTimeline& timeline,
                                          const Burst& burst, const LexiconSet& lexicons);

// Lowercased tokens with ASCII punctuation stripped; the token stream both
// classifiers run on.
std::vector<std::string> lexicon_tokens(std::string_view text);

// Token count on Unicode whitespace, punctuation kept (word-count metric).
std::size_t word_count(std::string_view text);

}  // namespace burstlab
