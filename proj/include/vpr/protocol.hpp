#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "vpr/bootstrap.hpp"
#include "vpr/encode.hpp"
#include "vpr/errors.hpp"
#include "vpr/extract.hpp"
#include "vpr/hash.hpp"
#include "vpr/journey.hpp"
#include "vpr/kmeans.hpp"
#include "vpr/metrics.hpp"
#include "vpr/rng.hpp"
#include "vpr/score.hpp"

namespace vpr {

enum class DeviceSplit { Within, Cross, All };

inline const char* device_split_name(DeviceSplit s) {
  switch (s) {
    case DeviceSplit::Within: return "within";
    case DeviceSplit::Cross: return "cross";
    case DeviceSplit::All: return "all";
  }
  return "?";
}

inline DeviceSplit device_split_from_name(const std::string& name) {
  if (name == "within") return DeviceSplit::Within;
  if (name == "cross") return DeviceSplit::Cross;
  if (name == "all") return DeviceSplit::All;
  throw DataError("unknown device split: " + name);
}

/// Everything one evaluation run depends on. The seed is recorded in all
/// derived reports; `jobs` never changes results.
struct EvalConfig {
  Method method = Method::SF_GABOR;
  Encoding encoding = Encoding::HA;
  DistanceMetric metric = DistanceMetric::Chi2;
  int K = 4000;
  int trials = 10000;           // bootstrap resamples
  uint64_t seed = 0;
  DeviceSplit split = DeviceSplit::All;
  double cdf_range_cm = 0.0;    // 0: use the longest evaluated corridor
  size_t train_cap = 200000;    // training-sample cap per codebook
  int kmeans_max_iters = 100;
  int query_stride = 1;         // 1 = every query frame
  std::string dictionary_scope = "corridor";  // "corridor" | "corpus"
  int jobs = 1;
  std::string work_dir;         // descriptor dump cache directory
};

inline void validate_eval_config(const EvalConfig& c) {
  if (c.method == Method::LW_COLOR) {
    if (c.encoding != Encoding::DIRECT)
      throw DataError("LW_COLOR frames carry a single whole-frame descriptor; use DIRECT encoding");
  } else if (c.encoding == Encoding::DIRECT) {
    throw DataError("DIRECT encoding applies only to LW_COLOR");
  }
  if (c.encoding != Encoding::DIRECT && c.K < 1) throw DataError("K must be >= 1");
  if (c.encoding != Encoding::HA && c.metric == DistanceMetric::Chi2)
    throw DataError("chi2 requires non-negative histograms; use hellinger with " +
                    std::string(encoding_name(c.encoding)));
  if (c.trials < 1) throw DataError("trials must be >= 1");
  if (c.query_stride < 1) throw DataError("query_stride must be >= 1");
  if (c.dictionary_scope != "corridor" && c.dictionary_scope != "corpus")
    throw DataError("dictionary_scope must be 'corridor' or 'corpus'");
}

/// One query pass evaluated against the remaining passes of its corridor.
struct QueryRound {
  std::string corridor_id;
  std::string query_journey_id;
  std::string query_device_id;
  std::vector<std::string> db_journey_ids;
  std::vector<std::string> training_journey_ids;  // codebook provenance
  std::vector<Match> matches;
  std::vector<double> errors_cm;  // valid matches only
  double range_cm = 0.0;          // corridor length used for this round's AUC
  double auc = std::numeric_limits<double>::quiet_NaN();
};

struct EvalResult {
  EvalConfig config;
  std::vector<QueryRound> rounds;
  std::vector<double> pooled_errors;
  ErrorDistribution pooled;
  double range_cm = 0.0;
  double auc_min = std::numeric_limits<double>::quiet_NaN();
  double auc_max = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> warnings;
};

namespace detail {

inline bool split_keeps(DeviceSplit s, const std::string& query_device,
                        const std::string& db_device) {
  switch (s) {
    case DeviceSplit::Within: return query_device == db_device;
    case DeviceSplit::Cross: return query_device != db_device;
    case DeviceSplit::All: return true;
  }
  return true;
}

inline uint64_t round_seed(uint64_t master, const std::string& corridor_id,
                           const std::string& query_id) {
  return splitmix64(master ^ Hasher().str(corridor_id).str(query_id).digest());
}

inline std::string journey_dump_path(const std::string& work_dir, const std::string& journey_id,
                                     Method method) {
  return (std::filesystem::path(work_dir) / (journey_id + "." + method_name(method) + ".desc"))
      .string();
}

/// Extract on first use; dumps are deterministic so an existing file from
/// the same corpus is safe to reuse.
inline std::string ensure_dump(const Journey& journey, Method method, const std::string& work_dir,
                               int jobs) {
  std::filesystem::create_directories(work_dir);
  std::string path = journey_dump_path(work_dir, journey.journey_id, method);
  if (!std::filesystem::exists(path)) extract_journey_to_dump(journey, method, path, jobs);
  return path;
}

struct RoundPlan {
  std::string corridor_id;
  const Journey* query = nullptr;
  std::vector<const Journey*> db;
  double corridor_len = 0.0;
};

inline std::vector<RoundPlan> plan_rounds(const Corpus& corpus, DeviceSplit split,
                                          std::vector<std::string>& warnings) {
  std::vector<RoundPlan> plans;
  std::vector<std::string> corridor_ids = corpus.corridor_ids();
  std::sort(corridor_ids.begin(), corridor_ids.end());
  for (const std::string& cid : corridor_ids) {
    std::vector<const Journey*> journeys = corpus.corridor(cid);
    std::sort(journeys.begin(), journeys.end(),
              [](const Journey* a, const Journey* b) { return a->journey_id < b->journey_id; });
    if (journeys.size() < 2) {
      warnings.push_back("corridor " + cid + " has a single pass; skipped");
      continue;
    }
    double corridor_len = 0.0;
    for (const Journey* j : journeys) corridor_len = std::max(corridor_len, j->length_cm);
    for (const Journey* q : journeys) {
      RoundPlan plan;
      plan.corridor_id = cid;
      plan.query = q;
      plan.corridor_len = corridor_len;
      for (const Journey* j : journeys) {
        if (j == q) continue;
        if (!split_keeps(split, q->device_id, j->device_id)) continue;
        plan.db.push_back(j);
      }
      if (plan.db.empty()) {
        warnings.push_back("round " + q->journey_id + ": no database journeys after '" +
                           std::string(device_split_name(split)) + "' device split; skipped");
        continue;
      }
      plans.push_back(std::move(plan));
    }
  }
  return plans;
}

inline CodedJourney strided_coded_journey(const Journey& journey, std::vector<FrameCode> codes,
                                          int stride) {
  if (stride > 1) {
    std::vector<FrameCode> kept;
    for (size_t i = 0; i < codes.size(); i += size_t(stride)) kept.push_back(std::move(codes[i]));
    codes = std::move(kept);
  }
  return make_coded_journey(journey, std::move(codes));
}

inline void finalize_result(EvalResult& result) {
  const EvalConfig& config = result.config;
  double range = config.cdf_range_cm;
  if (range <= 0.0)
    for (const QueryRound& r : result.rounds) range = std::max(range, r.range_cm);
  result.range_cm = range;
  bool have_auc = false;
  for (QueryRound& round : result.rounds) {
    if (round.errors_cm.empty()) {
      result.warnings.push_back("round " + round.query_journey_id +
                                ": no valid matches; excluded from AUC summary");
      continue;
    }
    ErrorDistribution rd = bootstrap_error_cdf(
        round.errors_cm, round.range_cm, config.trials,
        splitmix64(round_seed(config.seed, round.corridor_id, round.query_journey_id) ^
                   0x62747374));
    round.auc = compute_auc(rd);
    if (!have_auc) {
      result.auc_min = result.auc_max = round.auc;
      have_auc = true;
    } else {
      result.auc_min = std::min(result.auc_min, round.auc);
      result.auc_max = std::max(result.auc_max, round.auc);
    }
    result.pooled_errors.insert(result.pooled_errors.end(), round.errors_cm.begin(),
                                round.errors_cm.end());
  }
  if (!result.pooled_errors.empty())
    result.pooled = bootstrap_error_cdf(result.pooled_errors, range, config.trials,
                                        splitmix64(config.seed ^ 0x706f6f6c));
}

}  // namespace detail

/// Leave-one-journey-out evaluation. For each corridor and each pass as
/// query: a codebook is trained with the query journey excluded, the
/// remaining (device-filtered) passes form the database, and every
/// query-stride-th frame is localized by score-matrix argmin.
inline EvalResult run_leave_one_out(const Corpus& corpus, const EvalConfig& config) {
  validate_eval_config(config);
  if (config.work_dir.empty()) throw DataError("run_leave_one_out: work_dir required");
  corpus.validate();

  EvalResult result;
  result.config = config;
  std::vector<detail::RoundPlan> plans = detail::plan_rounds(corpus, config.split, result.warnings);

  for (const detail::RoundPlan& plan : plans) {
    const Journey& query = *plan.query;
    uint64_t rseed = detail::round_seed(config.seed, plan.corridor_id, query.journey_id);

    QueryRound round;
    round.corridor_id = plan.corridor_id;
    round.query_journey_id = query.journey_id;
    round.query_device_id = query.device_id;
    round.range_cm = plan.corridor_len;
    for (const Journey* j : plan.db) round.db_journey_ids.push_back(j->journey_id);

    // Training pool: database journeys (corridor scope) or every eligible
    // non-query journey corpus-wide (corpus scope).
    std::vector<const Journey*> train_journeys(plan.db);
    if (config.dictionary_scope == "corpus") {
      for (const Journey& j : corpus.journeys) {
        if (j.journey_id == query.journey_id) continue;
        if (j.corridor_id == plan.corridor_id) continue;  // db set already has these
        if (!detail::split_keeps(config.split, query.device_id, j.device_id)) continue;
        train_journeys.push_back(&j);
      }
      std::sort(train_journeys.begin(), train_journeys.end(),
                [](const Journey* a, const Journey* b) { return a->journey_id < b->journey_id; });
    }

    Codebook cb;
    const Codebook* cb_ptr = nullptr;
    if (config.encoding != Encoding::DIRECT) {
      std::vector<std::pair<std::string, std::string>> dumps;
      for (const Journey* j : train_journeys)
        dumps.emplace_back(j->journey_id,
                           detail::ensure_dump(*j, config.method, config.work_dir, config.jobs));
      TrainingSet train =
          build_training_set(dumps, config.train_cap, splitmix64(rseed ^ 0x74726e));
      round.training_journey_ids = train.journey_ids;
      cb = train_codebook(train, config.method, config.K, splitmix64(rseed ^ 0x6b6d6e73),
                          query.journey_id, config.jobs, config.kmeans_max_iters);
      cb_ptr = &cb;
    }

    std::vector<CodedJourney> database;
    for (const Journey* j : plan.db) {
      std::string dump = detail::ensure_dump(*j, config.method, config.work_dir, config.jobs);
      database.push_back(
          make_coded_journey(*j, encode_dump(dump, config.encoding, cb_ptr, config.jobs)));
    }
    std::string qdump = detail::ensure_dump(query, config.method, config.work_dir, config.jobs);
    CodedJourney coded_query = detail::strided_coded_journey(
        query, encode_dump(qdump, config.encoding, cb_ptr, config.jobs), config.query_stride);

    ScoreMatrix matrix = build_score_matrix(coded_query, database, config.metric, config.jobs);
    round.matches = localize_matches(matrix, coded_query);
    for (const Match& m : round.matches)
      if (m.valid) round.errors_cm.push_back(m.error_cm);
    result.rounds.push_back(std::move(round));
  }

  detail::finalize_result(result);
  return result;
}

/// Sanity baseline: each query frame is assigned the position of a
/// uniformly random database frame; rounds, splits and bootstrap mirror
/// the real protocol.
inline EvalResult random_baseline_eval(const Corpus& corpus, const EvalConfig& config) {
  if (config.trials < 1) throw DataError("trials must be >= 1");
  if (config.query_stride < 1) throw DataError("query_stride must be >= 1");
  corpus.validate();

  EvalResult result;
  result.config = config;
  std::vector<detail::RoundPlan> plans = detail::plan_rounds(corpus, config.split, result.warnings);

  for (const detail::RoundPlan& plan : plans) {
    const Journey& query = *plan.query;
    uint64_t rseed = detail::round_seed(config.seed, plan.corridor_id, query.journey_id);
    Rng rng = Rng::substream(rseed, 0x726e64);

    QueryRound round;
    round.corridor_id = plan.corridor_id;
    round.query_journey_id = query.journey_id;
    round.query_device_id = query.device_id;
    round.range_cm = plan.corridor_len;
    for (const Journey* j : plan.db) round.db_journey_ids.push_back(j->journey_id);

    std::vector<std::pair<const Journey*, size_t>> db_frames;  // (journey, frame)
    for (const Journey* j : plan.db)
      for (size_t f = 0; f < j->frame_count(); ++f) db_frames.emplace_back(j, f);
    if (db_frames.empty()) continue;

    for (size_t f = 0; f < query.frame_count(); f += size_t(config.query_stride)) {
      auto [dj, dframe] = db_frames[rng.uniform_index(db_frames.size())];
      Match m;
      m.query_frame = int(f);
      m.valid = true;
      m.db_journey_id = dj->journey_id;
      m.db_frame = int(dframe);
      m.est_cm = dj->positions_cm[dframe];
      m.truth_cm = query.positions_cm[f];
      m.error_cm = std::fabs(m.est_cm - m.truth_cm);
      round.errors_cm.push_back(m.error_cm);
      round.matches.push_back(std::move(m));
    }
    result.rounds.push_back(std::move(round));
  }

  detail::finalize_result(result);
  return result;
}

inline ErrorDistribution random_baseline(const Corpus& corpus, uint64_t seed) {
  EvalConfig config;
  config.seed = seed;
  config.work_dir = ".";  // unused by the baseline
  EvalResult r = random_baseline_eval(corpus, config);
  if (r.pooled_errors.empty()) throw DataError("random_baseline: no evaluable rounds");
  return r.pooled;
}

/// Protocol hygiene check: the query journey must appear in neither the
/// codebook training provenance nor the database list of its round.
/// Returns human-readable violations; empty means clean.
inline std::vector<std::string> audit_protocol_hygiene(const EvalResult& result) {
  std::vector<std::string> violations;
  for (const QueryRound& round : result.rounds) {
    for (const std::string& id : round.db_journey_ids)
      if (id == round.query_journey_id)
        violations.push_back("round " + round.query_journey_id + ": query journey in database");
    for (const std::string& id : round.training_journey_ids)
      if (id == round.query_journey_id)
        violations.push_back("round " + round.query_journey_id +
                             ": query journey in codebook training provenance");
  }
  return violations;
}

}  // namespace vpr
