#include "burstlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace burstlab {

using nlohmann::json;

// ---------------------------------------------------------------- mood map

namespace {

struct MoodSeed {
  const char* name;
  std::initializer_list<const char*> members;
};

// Six pages of platform moods, ordered from most negative to most positive.
const MoodSeed kBundledMoods[6] = {
    {"Sadness",
     {"sad", "heartbroken", "depressed", "anxious", "nervous", "down", "lonely", "tired",
      "insecure", "exhausted", "overwhelmed", "afraid"}},
    {"Inadequacy",
     {"worried", "meh", "inadequate", "numb", "confused", "embarrassed", "shocked", "sick",
      "bored", "nothing"}},
    {"Frustration",
     {"frustrated", "annoyed", "angry", "furious", "irritated", "jealous", "stressed", "moody",
      "disgust"}},
    {"Support",
     {"supportive", "hopeful", "optimistic", "loving", "inspired", "proud", "nostalgic", "caring",
      "loved", "supported"}},
    {"Relief",
     {"excited", "amused", "thankful", "calm", "relaxed", "chilled", "relieved", "jolly",
      "determined", "motivated"}},
    {"Positivity",
     {"astonished", "positive", "surprised", "encouraged", "happy", "amazed", "ecstatic",
      "energetic"}},
};

}  // namespace

void MoodMap::build_index() {
  index_.clear();
  for (const auto& g : groups_) {
    for (const auto& m : g.members) {
      auto [it, inserted] = index_.emplace(m, g.group_index);
      if (!inserted)
        throw std::runtime_error("mood map: label '" + m + "' appears in more than one group");
    }
  }
}

MoodMap MoodMap::bundled() {
  MoodMap map;
  int idx = 1;
  for (const auto& seed : kBundledMoods) {
    MoodGroup g;
    g.group_index = idx++;
    g.name = seed.name;
    for (const char* m : seed.members) g.members.emplace_back(m);
    map.groups_.push_back(std::move(g));
  }
  map.build_index();
  return map;
}

MoodMap MoodMap::from_json(const json& j) {
  MoodMap map;
  if (!j.contains("groups") || !j["groups"].is_array())
    throw std::runtime_error("mood map: expected top-level 'groups' array");
  int expected = 1;
  for (const auto& jg : j["groups"]) {
    MoodGroup g;
    g.group_index = jg.at("group_index").get<int>();
    if (g.group_index != expected)
      throw std::runtime_error("mood map: groups must be numbered 1..N in order");
    ++expected;
    g.name = jg.at("name").get<std::string>();
    for (const auto& m : jg.at("members")) g.members.push_back(m.get<std::string>());
    map.groups_.push_back(std::move(g));
  }
  map.build_index();
  return map;
}

MoodMap MoodMap::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mood map: " + path);
  json j;
  in >> j;
  return from_json(j);
}

json MoodMap::to_json() const {
  json groups = json::array();
  for (const auto& g : groups_) {
    groups.push_back({{"group_index", g.group_index}, {"name", g.name}, {"members", g.members}});
  }
  return json{{"groups", groups}};
}

int MoodMap::group_of(std::string_view mood) const {
  auto it = index_.find(std::string(mood));
  if (it == index_.end())
    throw std::runtime_error("unknown mood label: '" + std::string(mood) + "'");
  return it->second;
}

bool MoodMap::contains(std::string_view mood) const {
  return index_.find(std::string(mood)) != index_.end();
}

int mood_group_of(std::string_view mood, const MoodMap& moods) { return moods.group_of(mood); }

// ---------------------------------------------------------------- time

namespace {

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

int parse_int_field(std::string_view s, std::size_t pos, std::size_t len) {
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (i >= s.size() || s[i] < '0' || s[i] > '9')
      throw std::runtime_error("bad timestamp: '" + std::string(s) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

Instant parse_iso8601_utc(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SS followed by "Z", "+00:00", or nothing.
  if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':')
    throw std::runtime_error("bad timestamp: '" + std::string(s) + "'");
  const int year = parse_int_field(s, 0, 4);
  const int month = parse_int_field(s, 5, 2);
  const int day = parse_int_field(s, 8, 2);
  const int hour = parse_int_field(s, 11, 2);
  const int minute = parse_int_field(s, 14, 2);
  const int second = parse_int_field(s, 17, 2);
  std::string_view tail = s.substr(19);
  if (!(tail.empty() || tail == "Z" || tail == "+00:00"))
    throw std::runtime_error("timestamp must be UTC: '" + std::string(s) + "'");
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60)
    throw std::runtime_error("bad timestamp: '" + std::string(s) + "'");
  return days_from_civil(year, month, day) * 86400 + hour * 3600 + minute * 60 + second;
}

Instant parse_timestamp(const json& v) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_string()) return parse_iso8601_utc(v.get<std::string>());
  throw std::runtime_error("ts must be an ISO-8601 UTC string or integer epoch seconds");
}

// ---------------------------------------------------------------- parsing

namespace {

Post post_from_json(const json& j, const MoodMap& moods) {
  if (!j.is_object()) throw std::runtime_error("post must be a JSON object");
  Post p;
  p.post_id = j.at("post_id").get<std::string>();
  if (p.post_id.empty()) throw std::runtime_error("post_id must be non-empty");
  p.user_id = j.at("user_id").get<std::string>();
  if (p.user_id.empty()) throw std::runtime_error("user_id must be non-empty");
  p.ts = parse_timestamp(j.at("ts"));

  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "original") {
    p.kind = PostKind::original;
  } else if (kind == "reply") {
    p.kind = PostKind::reply;
  } else {
    throw std::runtime_error("kind must be \"original\" or \"reply\", got \"" + kind + "\"");
  }

  p.category = j.at("category").get<std::string>();
  p.text = j.at("text").get<std::string>();
  p.anonymous = j.at("anonymous").get<bool>();

  if (j.contains("parent_post_id") && !j["parent_post_id"].is_null())
    p.parent_post_id = j["parent_post_id"].get<std::string>();
  if (j.contains("mood") && !j["mood"].is_null()) p.mood = j["mood"].get<std::string>();

  if (p.kind == PostKind::reply) {
    if (p.parent_post_id.empty()) throw std::runtime_error("reply without parent_post_id");
    if (!p.mood.empty()) throw std::runtime_error("reply must not carry a mood");
    if (p.anonymous) throw std::runtime_error("reply cannot be anonymous");
  } else {
    if (!p.parent_post_id.empty()) throw std::runtime_error("original with parent_post_id");
  }
  if (!p.mood.empty() && !moods.contains(p.mood))
    throw std::runtime_error("unknown mood label: '" + p.mood + "'");
  return p;
}

}  // namespace

ParseResult parse_posts(std::istream& in, const MoodMap& moods) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++result.lines;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      result.errors.push_back({line_no, "malformed JSON"});
      continue;
    }
    try {
      result.posts.push_back(post_from_json(j, moods));
    } catch (const std::exception& e) {
      result.errors.push_back({line_no, e.what()});
    }
  }
  return result;
}

ParseResult parse_posts_file(const std::string& path, const MoodMap& moods) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input: " + path);
  return parse_posts(in, moods);
}

json post_to_json(const Post& p) {
  nlohmann::ordered_json j;
  j["post_id"] = p.post_id;
  j["user_id"] = p.user_id;
  j["ts"] = p.ts;
  j["kind"] = p.is_reply() ? "reply" : "original";
  if (p.is_reply()) j["parent_post_id"] = p.parent_post_id;
  j["category"] = p.category;
  if (!p.mood.empty()) j["mood"] = p.mood;
  j["text"] = p.text;
  j["anonymous"] = p.anonymous;
  return j;
}

std::string post_to_jsonl_line(const Post& p) { return post_to_json(p).dump(); }

// ---------------------------------------------------------------- corpus

const std::string& Corpus::effective_category(std::uint32_t i) const {
  const Post& p = posts[i];
  if (p.is_reply()) {
    auto it = threads.find(p.parent_post_id);
    if (it != threads.end()) return posts[it->second.original].category;
  }
  return p.category;
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

BuildResult build_corpus(std::vector<Post> posts, MoodMap moods) {
  BuildResult result;
  Corpus& c = result.corpus;
  c.mood_map = std::move(moods);

  // Duplicate ids: keep the first occurrence, report and drop the rest.
  std::unordered_map<std::string, std::size_t> first_seen;
  std::vector<Post> kept;
  kept.reserve(posts.size());
  for (std::size_t i = 0; i < posts.size(); ++i) {
    auto [it, inserted] = first_seen.emplace(posts[i].post_id, i);
    if (!inserted) {
      result.errors.push_back(
          {0, "duplicate post_id '" + posts[i].post_id + "' (input positions " +
                  std::to_string(it->second + 1) + " and " + std::to_string(i + 1) + ")"});
      continue;
    }
    kept.push_back(std::move(posts[i]));
  }

  std::unordered_map<std::string, std::uint32_t> by_id;
  by_id.reserve(kept.size());
  for (std::uint32_t i = 0; i < kept.size(); ++i) by_id.emplace(kept[i].post_id, i);

  // Replies whose parent is missing or is itself a reply are rejected.
  std::vector<bool> drop(kept.size(), false);
  for (std::uint32_t i = 0; i < kept.size(); ++i) {
    const Post& p = kept[i];
    if (!p.is_reply()) continue;
    auto it = by_id.find(p.parent_post_id);
    if (it == by_id.end()) {
      result.errors.push_back(
          {0, "reply '" + p.post_id + "' references missing parent '" + p.parent_post_id + "'"});
      drop[i] = true;
    } else if (kept[it->second].is_reply()) {
      result.errors.push_back(
          {0, "reply '" + p.post_id + "' references parent '" + p.parent_post_id +
                  "' which is itself a reply"});
      drop[i] = true;
    }
  }

  c.posts.reserve(kept.size());
  for (std::uint32_t i = 0; i < kept.size(); ++i)
    if (!drop[i]) c.posts.push_back(std::move(kept[i]));

  // Threads: one per original, replies chronological.
  for (std::uint32_t i = 0; i < c.posts.size(); ++i)
    if (!c.posts[i].is_reply()) c.threads.emplace(c.posts[i].post_id, Thread{i, {}});
  for (std::uint32_t i = 0; i < c.posts.size(); ++i)
    if (c.posts[i].is_reply()) c.threads.at(c.posts[i].parent_post_id).replies.push_back(i);
  for (auto& [id, thread] : c.threads) {
    std::sort(thread.replies.begin(), thread.replies.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (c.posts[a].ts != c.posts[b].ts) return c.posts[a].ts < c.posts[b].ts;
      return c.posts[a].post_id < c.posts[b].post_id;
    });
  }

  // Timelines: chronological per user, ties broken by post_id.
  for (std::uint32_t i = 0; i < c.posts.size(); ++i) {
    auto& tl = c.timelines[c.posts[i].user_id];
    tl.user_id = c.posts[i].user_id;
    tl.posts.push_back(i);
  }
  for (auto& [uid, tl] : c.timelines) {
    std::sort(tl.posts.begin(), tl.posts.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (c.posts[a].ts != c.posts[b].ts) return c.posts[a].ts < c.posts[b].ts;
      return c.posts[a].post_id < c.posts[b].post_id;
    });
    tl.gaps.resize(tl.posts.size() > 0 ? tl.posts.size() - 1 : 0);
    for (std::size_t k = 0; k + 1 < tl.posts.size(); ++k)
      tl.gaps[k] = static_cast<double>(c.posts[tl.posts[k + 1]].ts - c.posts[tl.posts[k]].ts);
    tl.median_gap = median_of(tl.gaps);
    tl.active_age = tl.posts.empty()
                        ? 0.0
                        : static_cast<double>(c.posts[tl.posts.back()].ts -
                                              c.posts[tl.posts.front()].ts);
  }

  return result;
}

// ---------------------------------------------------------------- filtering

FilterConfig FilterConfig::from_json(const json& j) {
  FilterConfig f;
  if (j.contains("min_total_posts")) f.min_total_posts = j["min_total_posts"].get<int>();
  if (j.contains("max_total_posts")) f.max_total_posts = j["max_total_posts"].get<int>();
  if (j.contains("max_mode")) {
    const std::string mode = j["max_mode"].get<std::string>();
    if (mode == "fixed") {
      f.max_mode = MaxMode::fixed;
    } else if (mode == "three_sigma") {
      f.max_mode = MaxMode::three_sigma;
    } else {
      throw std::runtime_error("filter: max_mode must be \"fixed\" or \"three_sigma\"");
    }
  }
  if (j.contains("require_one_original_and_one_reply"))
    f.require_one_original_and_one_reply = j["require_one_original_and_one_reply"].get<bool>();
  if (j.contains("join_date_cutoff") && !j["join_date_cutoff"].is_null())
    f.join_date_cutoff = parse_timestamp(j["join_date_cutoff"]);
  if (j.contains("exclude_user_ids"))
    for (const auto& u : j["exclude_user_ids"]) f.exclude_user_ids.insert(u.get<std::string>());
  return f;
}

FilterConfig FilterConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open filter config: " + path);
  json j;
  in >> j;
  return from_json(j);
}

json FilterConfig::to_json() const {
  json j;
  j["min_total_posts"] = min_total_posts;
  j["max_total_posts"] = max_total_posts;
  j["max_mode"] = max_mode == MaxMode::fixed ? "fixed" : "three_sigma";
  j["require_one_original_and_one_reply"] = require_one_original_and_one_reply;
  if (join_date_cutoff) j["join_date_cutoff"] = *join_date_cutoff;
  j["exclude_user_ids"] = exclude_user_ids;
  return j;
}

Corpus filter_users(const Corpus& corpus, const FilterConfig& rules) {
  double max_posts = static_cast<double>(rules.max_total_posts);
  if (rules.max_mode == FilterConfig::MaxMode::three_sigma && !corpus.timelines.empty()) {
    double mean = 0.0;
    for (const auto& [uid, tl] : corpus.timelines) mean += static_cast<double>(tl.posts.size());
    mean /= static_cast<double>(corpus.timelines.size());
    double var = 0.0;
    for (const auto& [uid, tl] : corpus.timelines) {
      const double d = static_cast<double>(tl.posts.size()) - mean;
      var += d * d;
    }
    var /= static_cast<double>(corpus.timelines.size());
    max_posts = mean + 3.0 * std::sqrt(var);
  }

  Corpus out;
  out.posts = corpus.posts;
  out.threads = corpus.threads;
  out.mood_map = corpus.mood_map;
  for (const auto& [uid, tl] : corpus.timelines) {
    if (rules.exclude_user_ids.count(uid)) continue;
    const auto n = static_cast<int>(tl.posts.size());
    if (n < rules.min_total_posts) continue;
    if (static_cast<double>(n) > max_posts) continue;
    if (rules.require_one_original_and_one_reply) {
      bool has_original = false, has_reply = false;
      for (std::uint32_t i : tl.posts) {
        if (corpus.posts[i].is_reply())
          has_reply = true;
        else
          has_original = true;
      }
      if (!has_original || !has_reply) continue;
    }
    if (rules.join_date_cutoff && !tl.posts.empty() &&
        corpus.posts[tl.posts.front()].ts < *rules.join_date_cutoff)
      continue;
    out.timelines.emplace(uid, tl);
  }
  return out;
}

}  // namespace burstlab
