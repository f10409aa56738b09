#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vpr/config.hpp"
#include "vpr/errors.hpp"
#include "vpr/hash.hpp"
#include "vpr/manifest.hpp"
#include "vpr/protocol.hpp"
#include "vpr/report.hpp"
#include "vpr/text.hpp"

namespace vpr {

/// Content hash of a corpus: ids, timestamps, ground truth, and frame
/// bytes. Keys the descriptor cache so stale dumps can never be reused.
inline std::string corpus_content_hash(const Corpus& corpus) {
  Hasher h;
  for (const Journey& j : corpus.journeys) {
    h.str(j.journey_id).str(j.corridor_id).str(j.device_id);
    h.pod(int32_t(j.pass_number)).pod(j.length_cm);
    for (int64_t t : j.frame_timestamps) h.pod(t);
    for (double p : j.positions_cm) h.pod(p);
    for (size_t i = 0; i < j.frame_paths.size(); ++i) {
      if (!j.frame_paths[i].empty()) {
        h.file(j.frame_paths[i]);
      } else if (j.pixels_loaded()) {
        const Frame& f = j.frames[i];
        for (const Plane& plane : f.planes)
          h.bytes(plane.values.data(), plane.values.size() * sizeof(float));
      }
    }
  }
  return h.hex();
}

struct StageCounts {
  size_t computed = 0;
  size_t reused = 0;
};

/// Make sure every journey has a descriptor dump for `method` under
/// work_dir. With caching enabled, existing dumps are reused.
inline StageCounts ensure_corpus_dumps(const Corpus& corpus, Method method,
                                       const std::string& work_dir, int jobs, bool cache) {
  StageCounts counts;
  std::filesystem::create_directories(work_dir);
  for (const Journey& j : corpus.journeys) {
    std::string path = detail::journey_dump_path(work_dir, j.journey_id, method);
    if (cache && std::filesystem::exists(path)) {
      ++counts.reused;
      continue;
    }
    extract_journey_to_dump(j, method, path, jobs);
    ++counts.computed;
  }
  return counts;
}

inline std::string eval_job_label(const EvalJob& job) {
  std::string label = method_name(job.method);
  label += "_";
  label += encoding_name(job.encoding);
  if (job.encoding != Encoding::DIRECT) label += "_K" + std::to_string(job.K);
  label += "_";
  label += metric_name(job.metric);
  return label;
}

// ---- Per-configuration summary files (results/<label>.summary).

inline void write_summary(const std::filesystem::path& path, const ReportRow& row, double range_cm,
                          size_t samples, size_t rounds, const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write summary: " + path.string());
  out << "# stage=eval config_hash=" << config_hash << "\n";
  out << "method=" << row.method << "\n";
  out << "metric=" << row.metric << "\n";
  out << "encoding=" << row.encoding << "\n";
  out << "K=" << row.K << "\n";
  out << "mu_cm=" << format_sci(row.mu_cm, 16) << "\n";
  out << "sigma_cm=" << format_sci(row.sigma_cm, 16) << "\n";
  out << "auc_min=" << format_sci(row.auc_min, 16) << "\n";
  out << "auc_max=" << format_sci(row.auc_max, 16) << "\n";
  out << "trials=" << row.trials << "\n";
  out << "seed=" << row.seed << "\n";
  out << "range_cm=" << format_fixed(range_cm, 4) << "\n";
  out << "samples=" << samples << "\n";
  out << "rounds=" << rounds << "\n";
  if (!out) throw DataError("short write: " + path.string());
}

inline std::map<std::string, std::string> read_kv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    std::string s(trim(line));
    if (s.empty() || s[0] == '#') continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos) throw DataError(path.string() + ": expected key=value");
    kv[std::string(trim(s.substr(0, eq)))] = std::string(trim(s.substr(eq + 1)));
  }
  return kv;
}

inline ReportRow read_summary(const std::filesystem::path& path) {
  auto kv = read_kv_file(path);
  auto need = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw DataError(path.string() + ": missing key '" + key + "'");
    return it->second;
  };
  ReportRow row;
  row.method = need("method");
  row.metric = need("metric");
  row.encoding = need("encoding");
  row.K = int(detail::parse_int(need("K"), "K"));
  row.mu_cm = detail::parse_double(need("mu_cm"), "mu_cm");
  row.sigma_cm = detail::parse_double(need("sigma_cm"), "sigma_cm");
  row.auc_min = detail::parse_double(need("auc_min"), "auc_min");
  row.auc_max = detail::parse_double(need("auc_max"), "auc_max");
  row.trials = int(detail::parse_int(need("trials"), "trials"));
  row.seed = detail::parse_u64(need("seed"), "seed");
  return row;
}

/// Rebuild report.csv / report.txt from every summary under
/// out_dir/results. Returns the sorted rows.
inline std::vector<ReportRow> assemble_report(const std::filesystem::path& out_dir,
                                              const std::string& config_hash) {
  std::filesystem::path results = out_dir / "results";
  std::vector<std::filesystem::path> files;
  if (std::filesystem::exists(results))
    for (const auto& entry : std::filesystem::directory_iterator(results))
      if (entry.is_regular_file() && entry.path().extension() == ".summary")
        files.push_back(entry.path());
  if (files.empty()) throw DataError("no evaluation summaries under " + results.string());
  std::sort(files.begin(), files.end());
  std::vector<ReportRow> rows;
  for (const auto& f : files) rows.push_back(read_summary(f));
  rows = summarize_report(std::move(rows));
  write_report_csv((out_dir / "report.csv").string(), rows, "report", config_hash);
  write_report_text((out_dir / "report.txt").string(), rows);
  return rows;
}

/// Run the full evaluation pipeline: cached extraction, leave-one-out per
/// configured (method, encoding, metric), optional RANDOM baseline, then
/// report assembly. Logging carries the warm-cache skip notices.
inline std::vector<ReportRow> run_eval_pipeline(const Corpus& corpus, const RunConfig& config,
                                                std::ostream& log) {
  corpus.validate();
  std::filesystem::path out_dir(config.out_dir);
  std::filesystem::create_directories(out_dir / "results");

  std::string hash = config_hash_hex(config);
  {
    std::ofstream snap(out_dir / "config.resolved");
    if (!snap) throw DataError("cannot write resolved config snapshot");
    snap << resolved_config_text(config);
  }

  std::string corpus_hash = corpus_content_hash(corpus);
  std::string work_dir = (out_dir / "cache" / corpus_hash).string();
  log << "[corpus] " << corpus.journeys.size() << " journeys, content " << corpus_hash << "\n";

  for (Method m : config.methods) {
    StageCounts counts = ensure_corpus_dumps(corpus, m, work_dir, config.jobs, config.cache);
    if (counts.computed == 0)
      log << "[extract] " << method_name(m) << ": warm cache, stage skipped ("
          << counts.reused << " dumps reused)\n";
    else
      log << "[extract] " << method_name(m) << ": " << counts.computed << " journeys extracted, "
          << counts.reused << " reused\n";
  }

  for (const EvalJob& job : eval_jobs(config)) {
    std::string label = eval_job_label(job);
    EvalConfig ec = make_eval_config(config, job, work_dir);
    EvalResult result = run_leave_one_out(corpus, ec);
    for (const std::string& w : result.warnings) log << "[warn] " << label << ": " << w << "\n";
    if (result.pooled_errors.empty())
      throw DataError(label + ": evaluation produced no errors (no evaluable rounds)");

    ReportRow row = make_report_row(result);
    write_summary(out_dir / "results" / (label + ".summary"), row, result.range_cm,
                  result.pooled_errors.size(), result.rounds.size(), hash);
    write_cdf_csv((out_dir / ("cdf_" + label + ".csv")).string(), result.pooled, "eval", hash);
    for (const QueryRound& round : result.rounds) {
      write_trace_csv((out_dir / ("trace_" + label + "_" + round.query_journey_id + ".csv")).string(),
                      round.matches, "eval", hash);
      write_matches_csv(
          (out_dir / ("matches_" + label + "_" + round.query_journey_id + ".csv")).string(),
          round.matches, "eval", hash);
    }
    log << "[eval] " << label << ": mu=" << format_fixed(row.mu_cm, 2)
        << "cm sigma=" << format_fixed(row.sigma_cm, 2) << "cm auc=["
        << format_fixed(row.auc_min, 4) << "," << format_fixed(row.auc_max, 4) << "] over "
        << result.rounds.size() << " rounds\n";
  }

  if (config.include_random) {
    EvalConfig ec = make_eval_config(config, {Method::SIFT, Encoding::HA, DistanceMetric::Chi2, 1},
                                     work_dir);
    EvalResult result = random_baseline_eval(corpus, ec);
    for (const std::string& w : result.warnings) log << "[warn] RANDOM: " << w << "\n";
    if (result.pooled_errors.empty())
      throw DataError("RANDOM baseline produced no errors (no evaluable rounds)");
    ReportRow row = make_random_row(result);
    write_summary(out_dir / "results" / "RANDOM.summary", row, result.range_cm,
                  result.pooled_errors.size(), result.rounds.size(), hash);
    write_cdf_csv((out_dir / "cdf_RANDOM.csv").string(), result.pooled, "eval", hash);
    log << "[eval] RANDOM: mu=" << format_fixed(row.mu_cm, 2) << "cm\n";
  }

  std::vector<ReportRow> rows = assemble_report(out_dir, hash);
  log << "[report] " << (out_dir / "report.csv").string() << " (" << rows.size() << " rows)\n";
  return rows;
}

// ---- Standalone train/encode stages and the query index.

/// Train one codebook over the whole corpus (no exclusion; the
/// leave-one-out protocol trains its own per-round codebooks).
inline Codebook train_corpus_codebook(const Corpus& corpus, const RunConfig& config, Method method,
                                      int K, const std::string& work_dir) {
  ensure_corpus_dumps(corpus, method, work_dir, config.jobs, config.cache);
  std::vector<std::pair<std::string, std::string>> dumps;
  for (const Journey& j : corpus.journeys)
    dumps.emplace_back(j.journey_id, detail::journey_dump_path(work_dir, j.journey_id, method));
  TrainingSet train = build_training_set(dumps, config.train_cap, splitmix64(config.seed ^ 0x74726e));
  return train_codebook(train, method, K, splitmix64(config.seed ^ 0x6b6d6e73), "", config.jobs,
                        config.kmeans_max_iters);
}

struct IndexMeta {
  Method method = Method::SF_GABOR;
  Encoding encoding = Encoding::HA;
  DistanceMetric metric = DistanceMetric::Chi2;
  int K = 0;
  uint64_t seed = 0;
  std::string config_hash;
  std::vector<std::string> journey_ids;
  std::vector<std::string> device_ids;  // parallel to journey_ids
};

inline void write_index_meta(const std::filesystem::path& path, const IndexMeta& meta) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write index meta: " + path.string());
  out << "# stage=index config_hash=" << meta.config_hash << "\n";
  out << "method=" << method_name(meta.method) << "\n";
  out << "encoding=" << encoding_name(meta.encoding) << "\n";
  out << "metric=" << metric_name(meta.metric) << "\n";
  out << "K=" << meta.K << "\n";
  out << "seed=" << meta.seed << "\n";
  out << "journeys=" << detail::join_strings(meta.journey_ids) << "\n";
  out << "devices=" << detail::join_strings(meta.device_ids) << "\n";
  if (!out) throw DataError("short write: " + path.string());
}

inline IndexMeta read_index_meta(const std::filesystem::path& path) {
  auto kv = read_kv_file(path);
  auto need = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw DataError(path.string() + ": missing key '" + key + "'");
    return it->second;
  };
  IndexMeta meta;
  meta.method = method_from_name(need("method"));
  meta.encoding = encoding_from_name(need("encoding"));
  meta.metric = metric_from_name(need("metric"));
  meta.K = int(detail::parse_int(need("K"), "K"));
  meta.seed = detail::parse_u64(need("seed"), "seed");
  for (const std::string& j : split(need("journeys"), ','))
    meta.journey_ids.push_back(std::string(trim(j)));
  for (const std::string& d : split(need("devices"), ','))
    meta.device_ids.push_back(std::string(trim(d)));
  if (meta.journey_ids.size() != meta.device_ids.size())
    throw DataError(path.string() + ": journeys/devices length mismatch");
  return meta;
}

inline void write_positions_csv(const std::filesystem::path& path, const Journey& j,
                                const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write positions: " + path.string());
  out << "# stage=index config_hash=" << config_hash << "\n";
  out << "frame,position_cm\n";
  for (size_t i = 0; i < j.positions_cm.size(); ++i)
    out << i << ',' << format_sci(j.positions_cm[i], 16) << "\n";
  if (!out) throw DataError("short write: " + path.string());
}

inline std::vector<double> read_positions_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open positions: " + path.string());
  std::vector<double> positions;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    std::string s(trim(line));
    if (s.empty() || s[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // column header row
      continue;
    }
    auto fields = split(s, ',');
    if (fields.size() != 2) throw DataError(path.string() + ": expected frame,position_cm");
    size_t idx = size_t(detail::parse_int(fields[0], "frame"));
    if (idx != positions.size()) throw DataError(path.string() + ": non-contiguous frame index");
    positions.push_back(detail::parse_double(fields[1], "position_cm"));
  }
  return positions;
}

/// Build a query index: codebook (unless DIRECT) + per-journey frame
/// codes + per-journey ground-truth positions + metadata.
inline void build_index(const Corpus& corpus, const RunConfig& config, Method method,
                        Encoding encoding, int K, DistanceMetric metric,
                        const std::filesystem::path& index_dir, const std::string& work_dir,
                        std::ostream& log) {
  corpus.validate();
  if (method == Method::LW_COLOR && encoding != Encoding::DIRECT)
    throw DataError("LW_COLOR indexes use DIRECT encoding");
  if (method != Method::LW_COLOR && encoding == Encoding::DIRECT)
    throw DataError("DIRECT encoding applies only to LW_COLOR");
  std::filesystem::create_directories(index_dir);
  std::string hash = config_hash_hex(config);

  Codebook cb;
  const Codebook* cb_ptr = nullptr;
  if (encoding != Encoding::DIRECT) {
    cb = train_corpus_codebook(corpus, config, method, K, work_dir);
    write_codebook((index_dir / "codebook.bin").string(), cb);
    cb_ptr = &cb;
    log << "[train] " << method_name(method) << " K=" << K
        << ": final distortion " << format_sci(cb.distortion_log.back(), 6) << " after "
        << cb.distortion_log.size() << " assignment phases\n";
  } else {
    ensure_corpus_dumps(corpus, method, work_dir, config.jobs, config.cache);
  }

  IndexMeta meta;
  meta.method = method;
  meta.encoding = encoding;
  meta.metric = metric;
  meta.K = encoding == Encoding::DIRECT ? 0 : K;
  meta.seed = config.seed;
  meta.config_hash = hash;
  for (const Journey& j : corpus.journeys) {
    std::string dump = detail::journey_dump_path(work_dir, j.journey_id, method);
    if (!std::filesystem::exists(dump)) extract_journey_to_dump(j, method, dump, config.jobs);
    std::vector<FrameCode> codes = encode_dump(dump, encoding, cb_ptr, config.jobs);
    write_frame_codes((index_dir / (j.journey_id + ".codes")).string(), codes, method);
    write_positions_csv(index_dir / (j.journey_id + ".pos"), j, hash);
    meta.journey_ids.push_back(j.journey_id);
    meta.device_ids.push_back(j.device_id);
  }
  write_index_meta(index_dir / "index.meta", meta);
  log << "[index] " << index_dir.string() << ": " << meta.journey_ids.size() << " journeys, "
      << eval_job_label({method, encoding, metric, meta.K}) << "\n";
}

/// Localize one journey against a prebuilt index. Ground truth of the
/// query journey (from its own manifest) provides truth_cm/error_cm.
inline std::vector<Match> query_index(const std::filesystem::path& index_dir,
                                      const Journey& query, int jobs, ScoreMatrix* matrix_out = nullptr) {
  IndexMeta meta = read_index_meta(index_dir / "index.meta");
  Codebook cb;
  const Codebook* cb_ptr = nullptr;
  if (meta.encoding != Encoding::DIRECT) {
    cb = read_codebook((index_dir / "codebook.bin").string());
    if (cb.method != meta.method)
      throw DataError("index codebook method does not match index metadata");
    cb_ptr = &cb;
  }

  std::vector<CodedJourney> database;
  for (size_t i = 0; i < meta.journey_ids.size(); ++i) {
    const std::string& id = meta.journey_ids[i];
    CodedJourney cj;
    cj.journey_id = id;
    cj.device_id = meta.device_ids[i];
    Method stored = meta.method;
    cj.codes = read_frame_codes((index_dir / (id + ".codes")).string(), &stored);
    if (stored != meta.method) throw DataError("index codes method mismatch for " + id);
    std::vector<double> positions = read_positions_csv(index_dir / (id + ".pos"));
    for (const FrameCode& c : cj.codes) {
      if (c.frame_index < 0 || size_t(c.frame_index) >= positions.size())
        throw DataError("index positions out of range for " + id);
      cj.positions_cm.push_back(positions[size_t(c.frame_index)]);
    }
    database.push_back(std::move(cj));
  }

  std::vector<FrameCode> qcodes;
  {
    std::vector<DescriptorSet> sets = extract_journey(query, meta.method);
    std::optional<NearestCenterIndex> index;
    if (cb_ptr) index.emplace(*cb_ptr);
    for (const DescriptorSet& s : sets) {
      if (meta.encoding == Encoding::DIRECT) qcodes.push_back(encode_direct(s));
      else if (meta.encoding == Encoding::HA) qcodes.push_back(encode_bow(s, *cb_ptr, *index, jobs));
      else qcodes.push_back(encode_vlad(s, *cb_ptr, *index, jobs));
    }
  }
  CodedJourney coded_query = make_coded_journey(query, std::move(qcodes));
  ScoreMatrix matrix = build_score_matrix(coded_query, database, meta.metric, jobs);
  std::vector<Match> matches = localize_matches(matrix, coded_query);
  if (matrix_out) *matrix_out = std::move(matrix);
  return matches;
}

}  // namespace vpr
