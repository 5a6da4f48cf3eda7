#include "burstlab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace burstlab {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

const char* version() { return "1.0.0"; }

const char* run_status_name(RunStatus status) {
  switch (status) {
    case RunStatus::ok: return "ok";
    case RunStatus::validation_errors: return "validation_errors";
    case RunStatus::empty_group: return "empty_comparison_group";
  }
  return "unknown";
}

namespace {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::string fnv1a64_hex(std::string_view bytes) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write: " + tmp);
    out << content;
  }
  fs::rename(tmp, path);
}

std::string number_repr(double v) { return json(v).dump(); }

const std::vector<std::string>& registered_features() {
  static const std::vector<std::string> names = {
      "replies_given",        "engagement",          "replies_received_per_post",
      "burst_length",         "word_count",          "n_categories_posts",
      "n_categories_replies", "ses_given",           "ces_given",
      "ns_given",             "ses_received",        "ces_received",
      "ns_received",          "affect_pos_own",      "affect_neg_own",
      "affect_pos_received",  "affect_neg_received",
  };
  return names;
}

namespace {

struct BurstRecord {
  const Burst* burst = nullptr;
  const BurstOutcome* outcome = nullptr;
  BurstSupportProfile support;
  std::size_t n_originals = 0;
  std::size_t n_categories_posts = 0;
  std::size_t n_categories_replies = 0;
  CategorySimilarity sim;

  double feature(const std::string& name) const {
    if (name == "replies_given") return static_cast<double>(support.n_given);
    if (name == "engagement") return outcome->engagement;
    if (name == "replies_received_per_post")
      return n_originals ? static_cast<double>(support.n_received) /
                               static_cast<double>(n_originals)
                         : 0.0;
    if (name == "burst_length") return static_cast<double>(burst->size());
    if (name == "word_count") return outcome->mean_word_count;
    if (name == "n_categories_posts") return static_cast<double>(n_categories_posts);
    if (name == "n_categories_replies") return static_cast<double>(n_categories_replies);
    if (name == "ses_given") return support.ses_given;
    if (name == "ces_given") return support.ces_given;
    if (name == "ns_given") return support.ns_given;
    if (name == "ses_received") return support.ses_received;
    if (name == "ces_received") return support.ces_received;
    if (name == "ns_received") return support.ns_received;
    if (name == "affect_pos_own") return support.affect_own.pos;
    if (name == "affect_neg_own") return support.affect_own.neg;
    if (name == "affect_pos_received") return support.affect_received.pos;
    if (name == "affect_neg_received") return support.affect_received.neg;
    throw std::runtime_error("unknown feature: " + name);
  }
};

ordered_json ks_json(const KsResult& ks) {
  return ordered_json{{"d_stat", ks.d_stat},
                      {"p_value", ks.p_value},
                      {"n_pos", ks.n1},
                      {"n_neg", ks.n2},
                      {"method", ks.method == KsMethod::asymptotic ? "asymptotic" : "permutation"}};
}

ordered_json comparison_row_json(const ComparisonRow& row) {
  ordered_json j;
  j["feature"] = row.feature;
  j["pos_mean"] = row.pos_mean;
  j["pos_median"] = row.pos_median;
  j["neg_mean"] = row.neg_mean;
  j["neg_median"] = row.neg_median;
  j["ks"] = ks_json(row.ks);
  return j;
}

ordered_json robustness_row_json(const ConditionedMoodChange& row) {
  ordered_json j;
  j["condition"] = row.condition;
  j["n_conditioned"] = row.n_conditioned;
  j["n_complement"] = row.n_complement;
  j["mean_conditioned"] = row.mean_conditioned;
  j["mean_complement"] = row.mean_complement;
  j["positive_rate_conditioned"] = row.positive_rate_conditioned;
  j["positive_rate_complement"] = row.positive_rate_complement;
  return j;
}

ComparisonRow comparison_row_from_json(const json& j) {
  ComparisonRow row;
  row.feature = j.at("feature").get<std::string>();
  row.pos_mean = j.at("pos_mean").get<double>();
  row.pos_median = j.at("pos_median").get<double>();
  row.neg_mean = j.at("neg_mean").get<double>();
  row.neg_median = j.at("neg_median").get<double>();
  row.ks.d_stat = j.at("ks").at("d_stat").get<double>();
  row.ks.p_value = j.at("ks").at("p_value").get<double>();
  row.ks.n1 = j.at("ks").at("n_pos").get<std::size_t>();
  row.ks.n2 = j.at("ks").at("n_neg").get<std::size_t>();
  row.ks.method = j.at("ks").at("method") == "permutation" ? KsMethod::permutation
                                                           : KsMethod::asymptotic;
  return row;
}

ConditionedMoodChange robustness_row_from_json(const json& j) {
  ConditionedMoodChange row;
  row.condition = j.at("condition").get<std::string>();
  row.n_conditioned = j.at("n_conditioned").get<std::size_t>();
  row.n_complement = j.at("n_complement").get<std::size_t>();
  row.mean_conditioned = j.at("mean_conditioned").get<double>();
  row.mean_complement = j.at("mean_complement").get<double>();
  row.positive_rate_conditioned = j.at("positive_rate_conditioned").get<double>();
  row.positive_rate_complement = j.at("positive_rate_complement").get<double>();
  return row;
}

}  // namespace

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out = "feature,pos_mean,pos_median,neg_mean,neg_median,d_stat,p_value,n_pos,n_neg\n";
  for (const auto& r : rows) {
    out += r.feature;
    out += ',' + number_repr(r.pos_mean) + ',' + number_repr(r.pos_median);
    out += ',' + number_repr(r.neg_mean) + ',' + number_repr(r.neg_median);
    out += ',' + number_repr(r.ks.d_stat) + ',' + number_repr(r.ks.p_value);
    out += ',' + std::to_string(r.ks.n1) + ',' + std::to_string(r.ks.n2) + '\n';
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::string out = "n,mean_bursts_per_month,std\n";
  for (const auto& p : points) {
    out += number_repr(p.n) + ',' + number_repr(p.mean_bursts_per_month) + ',' +
           number_repr(p.std_bursts_per_month) + '\n';
  }
  return out;
}

std::string robustness_csv(const std::vector<ConditionedMoodChange>& rows) {
  std::string out =
      "condition,n_conditioned,n_complement,mean_conditioned,mean_complement,"
      "positive_rate_conditioned,positive_rate_complement\n";
  for (const auto& r : rows) {
    out += r.condition;
    out += ',' + std::to_string(r.n_conditioned) + ',' + std::to_string(r.n_complement);
    out += ',' + number_repr(r.mean_conditioned) + ',' + number_repr(r.mean_complement);
    out += ',' + number_repr(r.positive_rate_conditioned) + ',' +
           number_repr(r.positive_rate_complement) + '\n';
  }
  return out;
}

std::string histogram_csv(const std::vector<HistogramRow>& rows) {
  std::string out = "bin,pos_count,neg_count\n";
  for (const auto& r : rows) {
    out += number_repr(r.lo) + ".." + number_repr(r.hi);
    out += ',' + std::to_string(r.pos_count) + ',' + std::to_string(r.neg_count) + '\n';
  }
  return out;
}

ordered_json RunConfig::canonical_json(const LexiconSet& lexicons, const MocPhraseSet& phrases,
                                       const MoodMap& moods) const {
  ordered_json j;
  j["n_multiplier"] = n_multiplier;
  j["apply_filter"] = apply_filter;
  j["filter"] = filter.to_json();
  j["lexicon"] = lexicons.to_json();
  j["moc_phrases"] = phrases.to_json();
  j["mood_map"] = moods.to_json();
  j["features"] = features.empty() ? registered_features() : features;
  j["sweep_n"] = sweep_n;
  j["ks_method"] = ks_method == KsMethod::asymptotic ? "asymptotic" : "permutation";
  j["ks_permutations"] = ks_permutations;
  j["max_error_rate"] = max_error_rate;
  j["seed"] = seed;
  j["histogram_bins"] = histogram_bins;
  return j;
}

ordered_json RunReport::to_json() const {
  ordered_json j;
  j["tool"] = ordered_json{{"name", "burstlab"}, {"version", version()}};
  j["config_hash"] = config_hash;
  j["status"] = run_status_name(status);
  j["notices"] = notices;

  j["corpus"] = ordered_json{{"n_lines", n_lines},
                             {"n_errors", n_errors},
                             {"n_posts", n_posts},
                             {"n_users_total", n_users_total},
                             {"n_users_retained", n_users_retained},
                             {"n_posts_retained", n_posts_retained},
                             {"active_age_days_mean", active_age_days_mean},
                             {"active_age_days_median", active_age_days_median}};

  j["segmentation"] = ordered_json{{"n_bursts", burst_meta.n_bursts},
                                   {"n_users", burst_meta.n_users},
                                   {"mean_posts_per_burst", burst_meta.mean_posts_per_burst},
                                   {"median_posts_per_burst", burst_meta.median_posts_per_burst},
                                   {"mean_span_days", burst_meta.mean_span_days},
                                   {"mean_bursts_per_user", burst_meta.mean_bursts_per_user},
                                   {"ratio_inter_intra", burst_meta.ratio_inter_intra},
                                   {"mean_burstiness", mean_burstiness}};

  j["cohort"] = ordered_json{{"n_users", cohort.n_users},
                             {"n_bursts", cohort.n_bursts},
                             {"n_users_with_moc", cohort.n_users_with_moc},
                             {"n_bursts_with_moc", cohort.n_bursts_with_moc},
                             {"n_originals", cohort.n_originals},
                             {"pct_users_with_moc", cohort.pct_users_with_moc},
                             {"pct_bursts_with_moc", cohort.pct_bursts_with_moc},
                             {"pct_zero_reply_posts", cohort.pct_zero_reply_posts},
                             {"mean_moc_position_frac", cohort.mean_moc_position_frac},
                             {"mean_posts_before_moc", cohort.mean_posts_before_moc},
                             {"start_on_reply_rate_pos", cohort.start_on_reply_rate_pos},
                             {"start_on_reply_rate_neg", cohort.start_on_reply_rate_neg},
                             {"end_on_reply_rate_pos", cohort.end_on_reply_rate_pos},
                             {"end_on_reply_rate_neg", cohort.end_on_reply_rate_neg},
                             {"moc_rate_topmatch", moc_rate_topmatch},
                             {"moc_rate_no_topmatch", moc_rate_no_topmatch}};

  ordered_json comp;
  comp["available"] = comparison_available;
  comp["rows"] = ordered_json::array();
  for (const auto& row : comparison) comp["rows"].push_back(comparison_row_json(row));
  j["comparison"] = std::move(comp);

  ordered_json rob;
  rob["rows"] = ordered_json::array();
  for (const auto& row : robustness) rob["rows"].push_back(robustness_row_json(row));
  rob["skipped"] = robustness_skipped;
  j["robustness"] = std::move(rob);

  j["sweep"] = ordered_json::array();
  for (const auto& p : sweep)
    j["sweep"].push_back(ordered_json{{"n", p.n},
                                      {"mean_bursts_per_month", p.mean_bursts_per_month},
                                      {"std", p.std_bursts_per_month}});
  return j;
}

namespace {

struct LoadedInputs {
  MoodMap moods;
  LexiconSet lexicons;
  MocPhraseSet phrases;
};

LoadedInputs load_inputs(const RunConfig& cfg) {
  return {cfg.mood_map_path ? MoodMap::load(*cfg.mood_map_path) : MoodMap::bundled(),
          cfg.lexicon_path ? LexiconSet::load(*cfg.lexicon_path) : LexiconSet::bundled(),
          cfg.moc_phrases_path ? MocPhraseSet::load(*cfg.moc_phrases_path)
                               : MocPhraseSet::bundled()};
}

struct IngestedCorpus {
  Corpus corpus;
  std::size_t n_lines = 0;
  std::size_t n_errors = 0;
  std::size_t n_posts = 0;
  std::size_t n_users_total = 0;
  std::vector<std::string> error_samples;
  bool over_threshold = false;
};

IngestedCorpus ingest(const RunConfig& cfg, const MoodMap& moods) {
  IngestedCorpus in;
  ParseResult parsed = parse_posts_file(cfg.input_path, moods);
  in.n_lines = parsed.lines;
  for (const auto& e : parsed.errors) {
    if (in.error_samples.size() < 50)
      in.error_samples.push_back("line " + std::to_string(e.line) + ": " + e.message);
  }
  BuildResult built = build_corpus(std::move(parsed.posts), moods);
  for (const auto& e : built.errors) {
    if (in.error_samples.size() < 50)
      in.error_samples.push_back("line " + std::to_string(e.line) + ": " + e.message);
  }
  in.n_errors = parsed.errors.size() + built.errors.size();
  in.n_posts = built.corpus.posts.size();
  in.n_users_total = built.corpus.timelines.size();
  const double rate = in.n_lines == 0
                          ? (in.n_errors ? 1.0 : 0.0)
                          : static_cast<double>(in.n_errors) / static_cast<double>(in.n_lines);
  in.over_threshold = rate > cfg.max_error_rate;
  in.corpus = std::move(built.corpus);
  return in;
}

std::vector<double> default_sweep_range() {
  std::vector<double> n_values(150);
  std::iota(n_values.begin(), n_values.end(), 1.0);
  return n_values;
}

void write_report_files(const RunConfig& cfg, const RunReport& report,
                        const std::map<std::string, std::vector<HistogramRow>>& histograms) {
  const fs::path out_dir(cfg.out_dir);
  if (cfg.write_json) write_text_atomic((out_dir / "report.json").string(),
                                        report.to_json().dump(2) + "\n");
  if (cfg.write_csv) {
    if (report.comparison_available)
      write_text_atomic((out_dir / "comparison.csv").string(), comparison_csv(report.comparison));
    write_text_atomic((out_dir / "robustness.csv").string(), robustness_csv(report.robustness));
    write_text_atomic((out_dir / "sweep.csv").string(), sweep_csv(report.sweep));
    for (const auto& [feature, rows] : histograms)
      write_text_atomic((out_dir / "histograms" / (feature + ".csv")).string(),
                        histogram_csv(rows));
  }
}

}  // namespace

RunReport run_analyze(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  const LoadedInputs inputs = load_inputs(cfg);

  RunReport report;
  const std::string canonical =
      cfg.canonical_json(inputs.lexicons, inputs.phrases, inputs.moods).dump();
  report.config_hash = fnv1a64_hex(canonical);
  const std::uint64_t seed_base = fnv1a64(canonical) ^ cfg.seed;

  IngestedCorpus in = ingest(cfg, inputs.moods);
  report.n_lines = in.n_lines;
  report.n_errors = in.n_errors;
  report.n_posts = in.n_posts;
  report.n_users_total = in.n_users_total;
  for (const auto& e : in.error_samples) report.notices.push_back(e);

  if (in.over_threshold) {
    report.status = RunStatus::validation_errors;
    report.notices.push_back("input error rate exceeds threshold, analysis skipped");
    write_report_files(cfg, report, {});
    return report;
  }

  const Corpus corpus =
      cfg.apply_filter ? filter_users(in.corpus, cfg.filter) : std::move(in.corpus);
  report.n_users_retained = corpus.timelines.size();
  for (const auto& [user_id, timeline] : corpus.timelines)
    report.n_posts_retained += timeline.posts.size();

  if (corpus.timelines.empty()) {
    report.status = RunStatus::validation_errors;
    report.notices.push_back("no users survive filtering, analysis skipped");
    write_report_files(cfg, report, {});
    return report;
  }

  {
    std::vector<double> ages;
    ages.reserve(corpus.timelines.size());
    for (const auto& [user_id, timeline] : corpus.timelines)
      ages.push_back(timeline.active_age / 86400.0);
    report.active_age_days_mean = mean_of(ages);
    report.active_age_days_median = median_of(std::move(ages));
  }

  const SegmentedCorpus segmented = segment_corpus(corpus, {cfg.n_multiplier});
  report.burst_meta = burst_meta(corpus, segmented);
  {
    std::vector<double> values;
    values.reserve(segmented.size());
    for (const auto& [user_id, bursts] : segmented)
      values.push_back(burstiness(corpus.timelines.at(user_id), bursts).burstiness);
    report.mean_burstiness = mean_of(values);
  }

  const LabeledCorpus labeled = label_corpus(corpus, segmented, inputs.phrases);
  report.cohort = labeled.summary;

  // Flat per-burst feature records, in (user, burst index) order.
  std::vector<BurstRecord> records;
  records.reserve(labeled.summary.n_bursts);
  for (const auto& [user_id, bursts] : segmented) {
    const UserTimeline& timeline = corpus.timelines.at(user_id);
    const auto& outcomes = labeled.outcomes.at(user_id);
    for (std::size_t b = 0; b < bursts.size(); ++b) {
      BurstRecord rec;
      rec.burst = &bursts[b];
      rec.outcome = &outcomes[b];
      rec.support = burst_support_profile(corpus, timeline, bursts[b], inputs.lexicons);
      for (std::uint32_t pos = bursts[b].first; pos <= bursts[b].last; ++pos)
        if (!corpus.post(timeline.posts[pos]).is_reply()) ++rec.n_originals;
      const CategoryProfile profile =
          category_profile(corpus, timeline, bursts[b].first, bursts[b].last);
      rec.n_categories_posts = profile.n_categories_posts;
      rec.n_categories_replies = profile.n_categories_replies;
      rec.sim = category_similarity(profile);
      records.push_back(std::move(rec));
    }
  }

  {
    std::size_t topmatch = 0, topmatch_moc = 0, nomatch = 0, nomatch_moc = 0;
    for (const auto& rec : records) {
      if (!rec.sim.available) continue;
      if (rec.sim.top_match) {
        ++topmatch;
        topmatch_moc += rec.outcome->moc;
      } else {
        ++nomatch;
        nomatch_moc += rec.outcome->moc;
      }
    }
    if (topmatch)
      report.moc_rate_topmatch = static_cast<double>(topmatch_moc) / static_cast<double>(topmatch);
    if (nomatch)
      report.moc_rate_no_topmatch =
          static_cast<double>(nomatch_moc) / static_cast<double>(nomatch);
  }

  if (cfg.write_intermediates) {
    std::string bursts_out, outcomes_out;
    for (const auto& rec : records) {
      const Burst& b = *rec.burst;
      ordered_json bj;
      bj["user"] = b.user_id;
      bj["burst"] = b.index;
      bj["first"] = b.first;
      bj["last"] = b.last;
      bj["start"] = b.start;
      bj["end"] = b.end;
      bj["size"] = b.size();
      bursts_out += bj.dump() + "\n";

      ordered_json oj;
      oj["user"] = b.user_id;
      oj["burst"] = b.index;
      oj["moc"] = rec.outcome->moc;
      if (rec.outcome->moc) {
        oj["moc_post_index"] = *rec.outcome->moc_post_index;
        oj["moc_position_frac"] = *rec.outcome->moc_position_frac;
        oj["posts_before_moc"] = *rec.outcome->posts_before_moc;
      }
      oj["mood_change"] = rec.outcome->mood_change;
      oj["mood_valid"] = rec.outcome->mood_valid;
      if (rec.outcome->first_mood_group) oj["first_mood_group"] = *rec.outcome->first_mood_group;
      if (rec.outcome->last_mood_group) oj["last_mood_group"] = *rec.outcome->last_mood_group;
      oj["starts_on_reply"] = rec.outcome->starts_on_reply;
      oj["ends_on_reply"] = rec.outcome->ends_on_reply;
      oj["n_originals"] = rec.n_originals;
      oj["n_replies_received"] = rec.support.n_received;
      oj["sim_available"] = rec.sim.available;
      if (rec.sim.available) {
        oj["cosine_distance"] = rec.sim.cosine_distance;
        oj["top_match"] = rec.sim.top_match;
      }
      for (const auto& name : registered_features()) oj[name] = rec.feature(name);
      outcomes_out += oj.dump() + "\n";
    }
    write_text_atomic((fs::path(cfg.out_dir) / "bursts.jsonl").string(), bursts_out);
    write_text_atomic((fs::path(cfg.out_dir) / "outcomes.jsonl").string(), outcomes_out);
  }

  // Positive group = bursts with a detected change point.
  const std::vector<std::string>& feature_names =
      cfg.features.empty() ? registered_features() : cfg.features;
  std::map<std::string, std::vector<HistogramRow>> histograms;
  std::size_t n_pos = 0;
  for (const auto& rec : records) n_pos += rec.outcome->moc;
  if (n_pos == 0 || n_pos == records.size()) {
    report.status = RunStatus::empty_group;
    report.notices.push_back(n_pos == 0 ? "comparison omitted: no positive bursts"
                                        : "comparison omitted: no negative bursts");
  } else {
    report.comparison_available = true;
    std::vector<double> pos, neg;
    for (std::size_t f = 0; f < feature_names.size(); ++f) {
      const std::string& name = feature_names[f];
      pos.clear();
      neg.clear();
      for (const auto& rec : records)
        (rec.outcome->moc ? pos : neg).push_back(rec.feature(name));
      const std::uint64_t seed = seed_base ^ (0x9E3779B97F4A7C15ULL * (f + 1));
      report.comparison.push_back(
          compare_groups(name, pos, neg, cfg.ks_method, seed, cfg.ks_permutations));
      histograms[name] = histogram(pos, neg, cfg.histogram_bins);
    }
  }

  {
    std::vector<double> mood;
    mood.reserve(records.size());
    for (const auto& rec : records) mood.push_back(static_cast<double>(rec.outcome->mood_change));
    double affect_mean = 0.0;
    {
      std::vector<double> affect;
      affect.reserve(records.size());
      for (const auto& rec : records) affect.push_back(rec.support.affect_own.pos);
      affect_mean = mean_of(affect);
    }
    const std::pair<std::string, std::function<bool(const BurstRecord&)>> conditions[] = {
        {"posts_ge_15", [](const BurstRecord& r) { return r.burst->size() >= 15; }},
        {"ces_given_gt0", [](const BurstRecord& r) { return r.support.ces_given > 0.0; }},
        {"ses_given_gt0", [](const BurstRecord& r) { return r.support.ses_given > 0.0; }},
        {"engagement_ge_075", [](const BurstRecord& r) { return r.outcome->engagement >= 0.75; }},
        {"affect_pos_above_mean",
         [affect_mean](const BurstRecord& r) { return r.support.affect_own.pos > affect_mean; }}};
    std::vector<char> mask(records.size());
    for (const auto& [name, predicate] : conditions) {
      for (std::size_t i = 0; i < records.size(); ++i) mask[i] = predicate(records[i]);
      const bool any = std::find(mask.begin(), mask.end(), 1) != mask.end();
      const bool all = std::find(mask.begin(), mask.end(), 0) == mask.end();
      if (!any || all) {
        report.robustness_skipped.push_back(name);
        continue;
      }
      report.robustness.push_back(conditioned_mood_change(name, mood, mask));
    }
  }

  report.sweep = sweep_n(corpus, cfg.sweep_n.empty() ? default_sweep_range() : cfg.sweep_n);

  write_report_files(cfg, report, histograms);
  return report;
}

std::vector<SweepPoint> run_sweep(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  const LoadedInputs inputs = load_inputs(cfg);
  IngestedCorpus in = ingest(cfg, inputs.moods);
  if (in.over_threshold) throw std::runtime_error("input error rate exceeds threshold");
  const Corpus corpus =
      cfg.apply_filter ? filter_users(in.corpus, cfg.filter) : std::move(in.corpus);
  const std::vector<SweepPoint> points =
      sweep_n(corpus, cfg.sweep_n.empty() ? default_sweep_range() : cfg.sweep_n);
  write_text_atomic((fs::path(cfg.out_dir) / "sweep.csv").string(), sweep_csv(points));
  return points;
}

void render_report(const std::string& report_json_path, const std::string& out_dir) {
  std::ifstream in(report_json_path);
  if (!in) throw std::runtime_error("cannot open report: " + report_json_path);
  json j;
  in >> j;

  const fs::path dir(out_dir);
  fs::create_directories(dir);

  if (j.at("comparison").at("available").get<bool>()) {
    std::vector<ComparisonRow> rows;
    for (const auto& rj : j.at("comparison").at("rows")) rows.push_back(comparison_row_from_json(rj));
    write_text_atomic((dir / "comparison.csv").string(), comparison_csv(rows));
  }
  {
    std::vector<ConditionedMoodChange> rows;
    for (const auto& rj : j.at("robustness").at("rows")) rows.push_back(robustness_row_from_json(rj));
    write_text_atomic((dir / "robustness.csv").string(), robustness_csv(rows));
  }
  {
    std::vector<SweepPoint> points;
    for (const auto& pj : j.at("sweep")) {
      SweepPoint p;
      p.n = pj.at("n").get<double>();
      p.mean_bursts_per_month = pj.at("mean_bursts_per_month").get<double>();
      p.std_bursts_per_month = pj.at("std").get<double>();
      points.push_back(p);
    }
    write_text_atomic((dir / "sweep.csv").string(), sweep_csv(points));
  }
}

}  // namespace burstlab
