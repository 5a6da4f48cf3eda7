#include "burstlab/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace burstlab {

using nlohmann::json;

// ---------------------------------------------------------------- tokenization

namespace {

bool is_unicode_space(char32_t cp) {
  switch (cp) {
    case 0x0009: case 0x000A: case 0x000B: case 0x000C: case 0x000D: case 0x0020:
    case 0x0085: case 0x00A0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
    case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Minimal UTF-8 decode; invalid bytes are treated as opaque non-space chars.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  const unsigned char b0 = byte(i);
  if (b0 < 0x80) {
    i += 1;
    return b0;
  }
  if ((b0 >> 5) == 0x6 && i + 1 < s.size()) {
    const char32_t cp = ((b0 & 0x1Fu) << 6) | (byte(i + 1) & 0x3Fu);
    i += 2;
    return cp;
  }
  if ((b0 >> 4) == 0xE && i + 2 < s.size()) {
    const char32_t cp =
        ((b0 & 0x0Fu) << 12) | ((byte(i + 1) & 0x3Fu) << 6) | (byte(i + 2) & 0x3Fu);
    i += 3;
    return cp;
  }
  if ((b0 >> 3) == 0x1E && i + 3 < s.size()) {
    const char32_t cp = ((b0 & 0x07u) << 18) | ((byte(i + 1) & 0x3Fu) << 12) |
                        ((byte(i + 2) & 0x3Fu) << 6) | (byte(i + 3) & 0x3Fu);
    i += 4;
    return cp;
  }
  i += 1;
  return b0;
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

}  // namespace

std::size_t word_count(std::string_view text) {
  std::size_t count = 0;
  bool in_token = false;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t at = i;
    const char32_t cp = decode_utf8(text, i);
    (void)at;
    if (is_unicode_space(cp)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++count;
    }
  }
  return count;
}

std::vector<std::string> lexicon_tokens(std::string_view text) {
  std::vector<std::string> toks;
  std::string cur;
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char b = static_cast<unsigned char>(text[i]);
    if (b < 0x80) {
      const char c = static_cast<char>(b);
      const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '\'';
      if (keep) {
        cur.push_back(ascii_lower(c));
      } else if (!cur.empty()) {
        toks.push_back(std::move(cur));
        cur.clear();
      }
      ++i;
    } else {
      const std::size_t start = i;
      const char32_t cp = decode_utf8(text, i);
      if (is_unicode_space(cp)) {
        if (!cur.empty()) {
          toks.push_back(std::move(cur));
          cur.clear();
        }
      } else {
        cur.append(text.substr(start, i - start));
      }
    }
  }
  if (!cur.empty()) toks.push_back(std::move(cur));
  return toks;
}

// ---------------------------------------------------------------- defaults

namespace {

const char* const kDefaultSes[] = {"Same", "Been there", "I know how you feel"};
const char* const kDefaultNs[] = {"Others feel the same way", "DM me", "Message me on kik"};

// Generic English affect vocabulary; trailing '*' matches any continuation.
const char* const kAffectPos[] = {
    "accept", "accepted", "accepting", "admir*", "ador*", "affection*", "amaz*", "amus*",
    "appreciat*", "assur*", "awesome", "balanced", "beaut*", "belong", "belonging", "best",
    "better", "bless*", "bliss*", "bold", "brave*", "bright*", "brilliant*", "calm*", "capable",
    "cared", "carefree", "caring", "celebrat*", "champion", "charm*", "cheer*", "cherish*",
    "chill", "chilled", "comfort*", "compassion*", "confident*", "congrats", "congratulat*",
    "connected", "content", "contented", "courag*", "cozy", "creative", "cute", "daring",
    "dazzl*", "dear", "delicious", "delight*", "determined", "devoted", "eager*", "ease",
    "easier", "easily", "easy", "ecstatic*", "elated", "elegant", "empower*", "encourag*",
    "energetic", "energiz*", "enjoy*", "enthusias*", "excellent", "excit*", "fabulous",
    "faith*", "fantastic", "favorite", "favourite", "fearless", "festive", "fine", "flourish*",
    "fond", "fondness", "forgave", "forgiv*", "free", "freedom", "friend", "friendly",
    "friends", "friendship*", "fun", "funny", "generous*", "gentle", "genuine", "giggl*",
    "glad", "gladly", "glee*", "glorious", "glow*", "good", "goodness", "gorgeous", "grace",
    "graceful", "grateful*", "gratitude", "great", "greater", "greatest", "grin", "grinning",
    "happi*", "happy", "harmony", "heal", "healed", "healing", "healthy", "heartwarming",
    "heaven*", "helpful", "honest*", "honored", "honoured", "hope", "hoped", "hopeful*",
    "hopes", "hoping", "hug", "hugged", "hugs", "humor", "humour", "improv*", "inspir*",
    "interested", "interesting", "joke*", "jolly", "joy*", "keen", "kind", "kinder",
    "kindest", "kindly", "kindness", "laugh*", "light-hearted", "lighter", "likable", "like",
    "liked", "likes", "liking", "lively", "love", "loved", "lovely", "loves", "loving*",
    "loyal*", "lucky", "magical", "marvelous", "meaningful", "merry", "motivat*", "neat",
    "nice", "nicer", "nicest", "optimis*", "outstanding", "passion*", "peace*", "perfect*",
    "play", "playful*", "pleasant*", "pleased", "pleasure", "positiv*", "precious", "pretty",
    "pride", "proud*", "radiant", "refresh*", "relax*", "relief", "reliev*", "remarkable",
    "rescued", "respect*", "restored", "safe", "safely", "safety", "satisf*", "secure",
    "serene", "share", "shared", "sharing", "shine", "shining", "silly", "sincere*", "smart",
    "smil*", "soothing", "special", "splendid", "strength*", "strong", "stronger",
    "strongest", "succeed*", "success*", "sunny", "sunshine", "super", "superb", "support",
    "supported", "supportive", "sweet", "sweetest", "sweetheart", "sweetness", "terrific",
    "thank", "thanked", "thankful*", "thanks", "thoughtful", "thrill*", "thriv*", "tranquil*",
    "treasur*", "triumph*", "trust*", "uplift*", "valuable", "valued", "victor*", "vibrant",
    "warm", "warmth", "welcom*", "wholesome", "win", "winner", "winning", "wins", "wise",
    "wonderful*", "worthy", "wow", "yay",
};

const char* const kAffectNeg[] = {
    "abandon*", "abuse*", "abusive", "ache", "aching", "afraid", "aggravat*", "aggress*",
    "agitat*", "agoniz*", "agony", "alarm*", "alone", "anger*", "angr*", "anguish*", "annoy*",
    "anxi*", "apath*", "appall*", "argu*", "ashamed", "attack*", "awful", "awkward", "bad",
    "badly", "betray*", "bitter*", "blam*", "bleak", "bored", "boring", "bother*", "broke",
    "broken", "bruised", "brutal*", "bullied", "bully*", "burden*", "burnout", "chaos",
    "chaotic", "cheat*", "complain*", "confus*", "crappy", "crashed", "cried", "cries",
    "crisis", "critical", "criticiz*", "cruel*", "crushed", "cry", "crying", "damag*",
    "danger*", "dark", "darkness", "dead", "death", "defeat*", "deject*", "depress*",
    "desolate", "despair*", "desperat*", "despis*", "destroy*", "devastat*", "difficult*",
    "disappoint*", "disaster*", "discourag*", "disgust*", "dishearten*", "dislike*", "dismal",
    "distress*", "disturb*", "doom*", "doubt*", "drain", "drained", "draining", "dread*",
    "dreary", "dull", "dying", "embarrass*", "emptiness", "empty", "enrag*", "envious",
    "envy", "evil", "exhaust*", "fail*", "fake", "fatigue*", "fault", "fear", "feared",
    "fearful*", "fears", "fight*", "foolish", "fragile", "frantic", "freaked", "freaking",
    "fright*", "frustrat*", "furious*", "fury", "gloom*", "grief", "griev*", "grim", "gross",
    "guilt*", "harass*", "harm", "harmed", "harmful", "harsh", "hate", "hated", "hateful",
    "hates", "hating", "hatred", "heartache", "heartbreak*", "heartbroken", "helpless*",
    "hopeless*", "horrible", "horribly", "horrif*", "horror", "hostile", "humiliat*", "hurt*",
    "ignored", "inadequate", "inferior", "insecur*", "insult*", "irrita*", "isolat*",
    "jealous*", "lonel*", "longing", "lose", "loser", "losing", "loss", "lost", "lousy",
    "low", "mad", "madder", "maddest", "melanchol*", "miser*", "miss", "missed", "missing",
    "mistake*", "mocked", "moody", "mourn*", "nasty", "negativ*", "neglect*", "nervous*",
    "nightmare*", "numb", "numbness", "obsess*", "offend*", "outrag*", "overwhelm*", "pain",
    "painful*", "pains", "panic*", "paranoi*", "pathetic", "pessimis*", "pity", "poison*",
    "powerless", "pressur*", "problem*", "pushed", "rage", "raging", "regret*", "reject*",
    "resent*", "restless*", "ridicul*", "ruin*", "sad", "sadder", "saddest", "sadly",
    "sadness", "scare*", "scary", "scream*", "selfish*", "shaken", "shaky", "shame*",
    "shatter*", "shock*", "sick", "sicken*", "sobbing", "sorrow*", "sorry", "stress*",
    "struggl*", "stuck", "stupid", "suffer*", "suspicious", "tears", "tense", "tension",
    "terribl*", "terrif*", "terror*", "threat*", "tired", "torment*", "tortur*", "toxic",
    "traged*", "tragic", "trapped", "trauma*", "trembl*", "troubl*", "ugly", "unbearable",
    "uncomfortable", "uneas*", "unfair*", "unhapp*", "unlov*", "unsafe", "unwanted",
    "unwell", "upset*", "useless", "vicious", "victim*", "violent*", "vulnerab*", "weak",
    "weaker", "weary", "weep*", "weird", "worr*", "worse", "worst", "worthless*", "wounded",
    "wreck*", "wrong",
};

std::vector<std::string> to_vec(const char* const* arr, std::size_t n) {
  std::vector<std::string> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) v.emplace_back(arr[i]);
  return v;
}

}  // namespace

LexiconSet::LexiconSet(std::vector<std::string> ses_phrases, std::vector<std::string> ns_phrases,
                       int ces_context_min_tokens, std::vector<std::string> affect_pos,
                       std::vector<std::string> affect_neg)
    : ses_phrases_(std::move(ses_phrases)),
      ns_phrases_(std::move(ns_phrases)),
      ces_context_min_tokens_(ces_context_min_tokens),
      affect_pos_(std::move(affect_pos)),
      affect_neg_(std::move(affect_neg)) {
  if (ses_phrases_.empty()) throw std::runtime_error("lexicon: ses phrase list is empty");
  if (ns_phrases_.empty()) throw std::runtime_error("lexicon: ns phrase list is empty");
  if (ces_context_min_tokens_ < 1)
    throw std::runtime_error("lexicon: ces_context_min_tokens must be >= 1");
  compile();
}

LexiconSet LexiconSet::bundled() {
  return LexiconSet(to_vec(kDefaultSes, std::size(kDefaultSes)),
                    to_vec(kDefaultNs, std::size(kDefaultNs)), 5,
                    to_vec(kAffectPos, std::size(kAffectPos)),
                    to_vec(kAffectNeg, std::size(kAffectNeg)));
}

LexiconSet LexiconSet::from_json(const json& j) {
  auto strings = [&](const char* key, std::vector<std::string> fallback) {
    if (!j.contains(key)) return fallback;
    std::vector<std::string> v;
    for (const auto& s : j.at(key)) v.push_back(s.get<std::string>());
    return v;
  };
  LexiconSet defaults = bundled();
  return LexiconSet(strings("ses", defaults.ses_phrases_), strings("ns", defaults.ns_phrases_),
                    j.value("ces_context_min_tokens", defaults.ces_context_min_tokens_),
                    strings("affect_pos", defaults.affect_pos_),
                    strings("affect_neg", defaults.affect_neg_));
}

LexiconSet LexiconSet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon: " + path);
  json j;
  in >> j;
  return from_json(j);
}

json LexiconSet::to_json() const {
  json j;
  j["ses"] = ses_phrases_;
  j["ns"] = ns_phrases_;
  j["ces_context_min_tokens"] = ces_context_min_tokens_;
  j["affect_pos"] = affect_pos_;
  j["affect_neg"] = affect_neg_;
  return j;
}

void LexiconSet::compile() {
  ses_compiled_.clear();
  for (const auto& p : ses_phrases_) {
    auto toks = lexicon_tokens(p);
    if (toks.empty()) throw std::runtime_error("lexicon: ses phrase '" + p + "' has no tokens");
    ses_compiled_.push_back(std::move(toks));
  }
  ns_compiled_.clear();
  for (const auto& p : ns_phrases_) {
    auto toks = lexicon_tokens(p);
    if (toks.empty()) throw std::runtime_error("lexicon: ns phrase '" + p + "' has no tokens");
    ns_compiled_.push_back(std::move(toks));
  }
  auto build = [](const std::vector<std::string>& entries, AffectMatcher& m) {
    m.exact.clear();
    m.prefixes.clear();
    for (const auto& e : entries) {
      std::string lower;
      lower.reserve(e.size());
      for (char c : e) lower.push_back(ascii_lower(c));
      if (!lower.empty() && lower.back() == '*') {
        lower.pop_back();
        if (!lower.empty()) m.prefixes.push_back(std::move(lower));
      } else if (!lower.empty()) {
        m.exact.insert(std::move(lower));
      }
    }
    std::sort(m.prefixes.begin(), m.prefixes.end());
  };
  build(affect_pos_, pos_matcher_);
  build(affect_neg_, neg_matcher_);
}

bool LexiconSet::AffectMatcher::matches(const std::string& token) const {
  if (exact.count(token)) return true;
  // Prefixes are sorted; every prefix of `token` that appears in the list is
  // <= token and >= its own first character, so scan the narrow range.
  auto it = std::upper_bound(prefixes.begin(), prefixes.end(), token);
  while (it != prefixes.begin()) {
    --it;
    if (token.compare(0, it->size(), *it) == 0) return true;
    if ((*it)[0] != token[0]) break;
  }
  return false;
}

// ---------------------------------------------------------------- classifiers

namespace {

// Marks every token covered by an occurrence of any phrase; returns whether
// at least one phrase matched.
bool mark_phrase_coverage(const std::vector<std::string>& toks,
                          const std::vector<std::vector<std::string>>& phrases,
                          std::vector<char>* covered) {
  bool any = false;
  for (const auto& ptoks : phrases) {
    if (ptoks.size() > toks.size()) continue;
    for (std::size_t start = 0; start + ptoks.size() <= toks.size(); ++start) {
      bool hit = true;
      for (std::size_t k = 0; k < ptoks.size(); ++k) {
        if (toks[start + k] != ptoks[k]) {
          hit = false;
          break;
        }
      }
      if (hit) {
        any = true;
        if (covered)
          for (std::size_t k = 0; k < ptoks.size(); ++k) (*covered)[start + k] = 1;
      }
    }
  }
  return any;
}

}  // namespace

SupportLabels LexiconSet::classify_support(std::string_view text) const {
  SupportLabels labels;
  const std::vector<std::string> toks = lexicon_tokens(text);
  if (toks.empty()) return labels;

  std::vector<char> covered(toks.size(), 0);
  if (mark_phrase_coverage(toks, ses_compiled_, &covered)) {
    std::size_t residual = 0;
    for (char c : covered)
      if (!c) ++residual;
    if (residual < static_cast<std::size_t>(ces_context_min_tokens_))
      labels.ses = true;
    else
      labels.ces = true;
  }
  labels.ns = mark_phrase_coverage(toks, ns_compiled_, nullptr);
  return labels;
}

AffectScores LexiconSet::affect_scores(std::string_view text) const {
  AffectScores scores;
  const std::vector<std::string> toks = lexicon_tokens(text);
  if (toks.empty()) return scores;
  std::size_t pos = 0, neg = 0;
  for (const auto& t : toks) {
    if (pos_matcher_.matches(t)) ++pos;
    if (neg_matcher_.matches(t)) ++neg;
  }
  const double total = static_cast<double>(toks.size());
  scores.pos = 100.0 * static_cast<double>(pos) / total;
  scores.neg = 100.0 * static_cast<double>(neg) / total;
  return scores;
}

SupportLabels classify_support(std::string_view text, const LexiconSet& lexicons) {
  return lexicons.classify_support(text);
}

AffectScores affect_scores(std::string_view text, const LexiconSet& lexicons) {
  return lexicons.affect_scores(text);
}

// ---------------------------------------------------------------- burst profile

BurstSupportProfile burst_support_profile(const Corpus& corpus, const UserTimeline& timeline,
                                          const Burst& burst, const LexiconSet& lexicons) {
  BurstSupportProfile profile;
  std::size_t ses_g = 0, ces_g = 0, ns_g = 0;
  std::size_t ses_r = 0, ces_r = 0, ns_r = 0;
  double own_pos = 0.0, own_neg = 0.0;
  double recv_pos = 0.0, recv_neg = 0.0;
  std::size_t own_n = 0;

  for (std::uint32_t pos = burst.first; pos <= burst.last; ++pos) {
    const std::uint32_t idx = timeline.posts[pos];
    const Post& p = corpus.post(idx);

    const AffectScores own = lexicons.affect_scores(p.text);
    own_pos += own.pos;
    own_neg += own.neg;
    ++own_n;

    if (p.is_reply()) {
      auto it = corpus.threads.find(p.parent_post_id);
      const bool to_other =
          it != corpus.threads.end() && corpus.post(it->second.original).user_id != p.user_id;
      if (to_other) {
        ++profile.n_given;
        const SupportLabels l = lexicons.classify_support(p.text);
        ses_g += l.ses;
        ces_g += l.ces;
        ns_g += l.ns;
      }
    } else {
      auto it = corpus.threads.find(p.post_id);
      if (it == corpus.threads.end()) continue;
      for (std::uint32_t ridx : it->second.replies) {
        const Post& reply = corpus.post(ridx);
        if (reply.user_id == p.user_id) continue;
        ++profile.n_received;
        const SupportLabels l = lexicons.classify_support(reply.text);
        ses_r += l.ses;
        ces_r += l.ces;
        ns_r += l.ns;
        const AffectScores ra = lexicons.affect_scores(reply.text);
        recv_pos += ra.pos;
        recv_neg += ra.neg;
      }
    }
  }

  if (profile.n_given) {
    const double n = static_cast<double>(profile.n_given);
    profile.ses_given = static_cast<double>(ses_g) / n;
    profile.ces_given = static_cast<double>(ces_g) / n;
    profile.ns_given = static_cast<double>(ns_g) / n;
  }
  if (profile.n_received) {
    const double n = static_cast<double>(profile.n_received);
    profile.ses_received = static_cast<double>(ses_r) / n;
    profile.ces_received = static_cast<double>(ces_r) / n;
    profile.ns_received = static_cast<double>(ns_r) / n;
    profile.affect_received.pos = recv_pos / n;
    profile.affect_received.neg = recv_neg / n;
  }
  if (own_n) {
    profile.affect_own.pos = own_pos / static_cast<double>(own_n);
    profile.affect_own.neg = own_neg / static_cast<double>(own_n);
  }
  return profile;
}

}  // namespace burstlab
