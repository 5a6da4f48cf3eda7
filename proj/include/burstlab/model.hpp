#pragma once
// Domain model for timestamped activity logs: posts, threads, per-user
// timelines, the bundled mood taxonomy, and the user filtering rules.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace burstlab {

using Instant = std::int64_t;  // seconds since the Unix epoch, UTC

enum class PostKind { original, reply };

struct Post {
  std::string post_id;
  std::string user_id;
  Instant ts = 0;
  PostKind kind = PostKind::original;
  std::string parent_post_id;  // replies only: id of the thread's original post
  std::string category;
  std::string mood;  // originals only; empty when absent
  std::string text;
  bool anonymous = false;

  bool is_reply() const { return kind == PostKind::reply; }
  bool has_mood() const { return !mood.empty(); }
};

struct MoodGroup {
  int group_index = 0;  // 1..6, ascending valence
  std::string name;
  std::vector<std::string> members;
};

// The six-group partition of the 59 mood labels. Group 1 is the most
// negative, group 6 the most positive.
class MoodMap {
 public:
  static MoodMap bundled();
  static MoodMap from_json(const nlohmann::json& j);
  static MoodMap load(const std::string& path);

  int group_of(std::string_view mood) const;  // throws on unknown label
  bool contains(std::string_view mood) const;
  const std::vector<MoodGroup>& groups() const { return groups_; }
  std::size_t mood_count() const { return index_.size(); }
  nlohmann::json to_json() const;

 private:
  std::vector<MoodGroup> groups_;
  std::unordered_map<std::string, int> index_;
  void build_index();
};

struct UserTimeline {
  std::string user_id;
  std::vector<std::uint32_t> posts;  // indices into Corpus::posts, chronological
  std::vector<double> gaps;          // seconds between consecutive posts, size = posts-1
  double median_gap = 0.0;           // 0 for timelines with fewer than 2 posts
  double active_age = 0.0;           // seconds, last post - first post
};

struct Thread {
  std::uint32_t original = 0;         // index of the original post
  std::vector<std::uint32_t> replies; // reply indices, chronological
};

struct Corpus {
  std::vector<Post> posts;
  std::map<std::string, UserTimeline> timelines;   // keyed by user_id
  std::unordered_map<std::string, Thread> threads; // keyed by original post_id
  MoodMap mood_map;

  const Post& post(std::uint32_t i) const { return posts[i]; }

  // Replies carry the category of their thread's original post.
  const std::string& effective_category(std::uint32_t i) const;
};

struct IngestError {
  std::size_t line = 0;  // 1-based input line; 0 when not tied to a line
  std::string message;
};

struct ParseResult {
  std::vector<Post> posts;
  std::vector<IngestError> errors;
  std::size_t lines = 0;  // non-blank input lines seen
};

// One post per line, JSON. Schema violations are collected per line, never
// thrown; callers decide whether the error rate is acceptable.
ParseResult parse_posts(std::istream& in, const MoodMap& moods);
ParseResult parse_posts_file(const std::string& path, const MoodMap& moods);

struct BuildResult {
  Corpus corpus;
  std::vector<IngestError> errors;  // duplicate ids, dangling parents
};

BuildResult build_corpus(std::vector<Post> posts, MoodMap moods);

struct FilterConfig {
  int min_total_posts = 10;
  int max_total_posts = 2028;
  // "three_sigma" recomputes the max as mean + 3*stddev of per-user post
  // counts over the unfiltered corpus; "fixed" uses max_total_posts.
  enum class MaxMode { fixed, three_sigma };
  MaxMode max_mode = MaxMode::fixed;
  bool require_one_original_and_one_reply = true;
  std::optional<Instant> join_date_cutoff;  // first post must be at or after this
  std::set<std::string> exclude_user_ids;

  static FilterConfig from_json(const nlohmann::json& j);
  static FilterConfig load(const std::string& path);
  nlohmann::json to_json() const;
};

// Restricts timelines to users passing every rule. All posts and threads are
// kept so that replies involving removed users still resolve; removed users
// simply stop being analysis subjects.
Corpus filter_users(const Corpus& corpus, const FilterConfig& rules);

int mood_group_of(std::string_view mood, const MoodMap& moods);

// Statistical median; even-length input averages the two middle values.
double median_of(std::vector<double> values);

// "2016-01-04T10:30:00Z" (optionally "+00:00") or integer epoch seconds.
Instant parse_timestamp(const nlohmann::json& v);
Instant parse_iso8601_utc(std::string_view s);

nlohmann::json post_to_json(const Post& p);
std::string post_to_jsonl_line(const Post& p);

}  // namespace burstlab
