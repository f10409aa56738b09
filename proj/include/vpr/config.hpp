#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "vpr/descriptor.hpp"
#include "vpr/encode.hpp"
#include "vpr/errors.hpp"
#include "vpr/hash.hpp"
#include "vpr/metrics.hpp"
#include "vpr/protocol.hpp"
#include "vpr/synth.hpp"
#include "vpr/text.hpp"

namespace vpr {

/// One run's worth of knobs, read from a key=value config file. Every
/// stage writes a resolved snapshot of these so outputs are attributable.
struct RunConfig {
  std::string dataset_root;
  std::string out_dir = "out";
  std::vector<Method> methods = {Method::SF_GABOR};
  std::vector<Encoding> encodings = {Encoding::HA, Encoding::VLAD};
  std::vector<DistanceMetric> metrics = {DistanceMetric::Chi2};
  int ha_k = 4000;    // hard-assignment codebook size
  int vlad_k = 256;   // VLAD codebook size
  uint64_t seed = 42;
  int jobs = 1;
  bool cache = true;
  DeviceSplit split = DeviceSplit::All;
  int trials = 10000;
  int query_stride = 1;
  size_t train_cap = 200000;
  int kmeans_max_iters = 100;
  std::string dictionary_scope = "corridor";
  bool include_random = true;
  double cdf_range_cm = 0.0;  // 0: longest evaluated corridor
  int topk = 0;               // >0: export top-k diagnostics from `query`

  // Synthetic-corpus shape (used by `synth`).
  int synth_corridors = 1;
  CorridorSpec synth;

  std::vector<CorridorSpec> synth_specs() const {
    std::vector<CorridorSpec> specs;
    for (int i = 0; i < synth_corridors; ++i) {
      CorridorSpec s = synth;
      s.corridor_id = "corridor" + std::to_string(i);
      specs.push_back(std::move(s));
    }
    return specs;
  }
};

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "1" || v == "true" || v == "on") return true;
  if (v == "0" || v == "false" || v == "off") return false;
  throw DataError("config key '" + key + "': expected boolean, got '" + v + "'");
}

inline double parse_double(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw DataError("config key '" + key + "': expected number, got '" + v + "'");
  }
}

inline long long parse_int(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw DataError("config key '" + key + "': expected integer, got '" + v + "'");
  }
}

inline uint64_t parse_u64(const std::string& v, const std::string& key) {
  try {
    size_t pos = 0;
    unsigned long long u = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return u;
  } catch (const std::exception&) {
    throw DataError("config key '" + key + "': expected unsigned integer, got '" + v + "'");
  }
}

}  // namespace detail

/// Parse config text (key=value lines, '#' comments). Unknown keys are
/// rejected so typos fail loudly.
inline RunConfig parse_run_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s(trim(line));
    if (s.empty() || s[0] == '#') continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw DataError("config line " + std::to_string(line_no) + ": expected key=value");
    std::string key(trim(s.substr(0, eq)));
    std::string value(trim(s.substr(eq + 1)));

    if (key == "dataset_root") c.dataset_root = value;
    else if (key == "out_dir") c.out_dir = value;
    else if (key == "methods") {
      c.methods.clear();
      for (const std::string& m : split(value, ','))
        c.methods.push_back(method_from_name(std::string(trim(m))));
      if (c.methods.empty()) throw DataError("config: methods list is empty");
    } else if (key == "encodings") {
      c.encodings.clear();
      for (const std::string& e : split(value, ','))
        c.encodings.push_back(encoding_from_name(std::string(trim(e))));
      if (c.encodings.empty()) throw DataError("config: encodings list is empty");
    } else if (key == "metrics") {
      c.metrics.clear();
      for (const std::string& m : split(value, ','))
        c.metrics.push_back(metric_from_name(std::string(trim(m))));
      if (c.metrics.empty()) throw DataError("config: metrics list is empty");
    } else if (key == "ha_k") c.ha_k = int(detail::parse_int(value, key));
    else if (key == "vlad_k") c.vlad_k = int(detail::parse_int(value, key));
    else if (key == "seed") c.seed = detail::parse_u64(value, key);
    else if (key == "jobs") c.jobs = int(detail::parse_int(value, key));
    else if (key == "cache") c.cache = detail::parse_bool(value, key);
    else if (key == "device_split") c.split = device_split_from_name(value);
    else if (key == "trials") c.trials = int(detail::parse_int(value, key));
    else if (key == "query_stride") c.query_stride = int(detail::parse_int(value, key));
    else if (key == "train_cap") c.train_cap = size_t(detail::parse_int(value, key));
    else if (key == "kmeans_max_iters") c.kmeans_max_iters = int(detail::parse_int(value, key));
    else if (key == "dictionary_scope") c.dictionary_scope = value;
    else if (key == "include_random") c.include_random = detail::parse_bool(value, key);
    else if (key == "cdf_range_cm") c.cdf_range_cm = detail::parse_double(value, key);
    else if (key == "topk") c.topk = int(detail::parse_int(value, key));
    else if (key == "synth_corridors") c.synth_corridors = int(detail::parse_int(value, key));
    else if (key == "synth_length_cm") c.synth.length_cm = detail::parse_double(value, key);
    else if (key == "synth_passes") c.synth.passes = int(detail::parse_int(value, key));
    else if (key == "synth_frame_rate_hz") c.synth.frame_rate_hz = detail::parse_double(value, key);
    else if (key == "synth_speed_min_cm_s") c.synth.speed_min_cm_s = detail::parse_double(value, key);
    else if (key == "synth_speed_max_cm_s") c.synth.speed_max_cm_s = detail::parse_double(value, key);
    else if (key == "synth_texture_richness") c.synth.texture_richness = detail::parse_double(value, key);
    else if (key == "synth_noise_level") c.synth.noise_level = detail::parse_double(value, key);
    else if (key == "synth_pass_jitter") c.synth.pass_jitter = detail::parse_double(value, key);
    else if (key == "synth_landmark_count") c.synth.landmark_count = int(detail::parse_int(value, key));
    else if (key == "synth_devices") {
      c.synth.devices.clear();
      for (const std::string& d : split(value, ','))
        c.synth.devices.push_back(std::string(trim(d)));
      if (c.synth.devices.empty()) throw DataError("config: synth_devices list is empty");
    } else {
      throw DataError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  return c;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

namespace detail {

inline std::string join_names(const std::vector<Method>& ms) {
  std::string s;
  for (size_t i = 0; i < ms.size(); ++i) s += (i ? "," : "") + std::string(method_name(ms[i]));
  return s;
}

inline std::string join_names(const std::vector<Encoding>& es) {
  std::string s;
  for (size_t i = 0; i < es.size(); ++i) s += (i ? "," : "") + std::string(encoding_name(es[i]));
  return s;
}

inline std::string join_names(const std::vector<DistanceMetric>& ms) {
  std::string s;
  for (size_t i = 0; i < ms.size(); ++i) s += (i ? "," : "") + std::string(metric_name(ms[i]));
  return s;
}

inline std::string join_strings(const std::vector<std::string>& vs) {
  std::string s;
  for (size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + vs[i];
  return s;
}

}  // namespace detail

/// Canonical key=value snapshot (sorted keys, fixed number formatting).
/// Written next to every run's outputs.
inline std::string resolved_config_text(const RunConfig& c) {
  std::map<std::string, std::string> kv;
  kv["dataset_root"] = c.dataset_root;
  kv["out_dir"] = c.out_dir;
  kv["methods"] = detail::join_names(c.methods);
  kv["encodings"] = detail::join_names(c.encodings);
  kv["metrics"] = detail::join_names(c.metrics);
  kv["ha_k"] = std::to_string(c.ha_k);
  kv["vlad_k"] = std::to_string(c.vlad_k);
  kv["seed"] = std::to_string(c.seed);
  kv["jobs"] = std::to_string(c.jobs);
  kv["cache"] = c.cache ? "1" : "0";
  kv["device_split"] = device_split_name(c.split);
  kv["trials"] = std::to_string(c.trials);
  kv["query_stride"] = std::to_string(c.query_stride);
  kv["train_cap"] = std::to_string(c.train_cap);
  kv["kmeans_max_iters"] = std::to_string(c.kmeans_max_iters);
  kv["dictionary_scope"] = c.dictionary_scope;
  kv["include_random"] = c.include_random ? "1" : "0";
  kv["cdf_range_cm"] = format_fixed(c.cdf_range_cm, 4);
  kv["topk"] = std::to_string(c.topk);
  kv["synth_corridors"] = std::to_string(c.synth_corridors);
  kv["synth_length_cm"] = format_fixed(c.synth.length_cm, 4);
  kv["synth_passes"] = std::to_string(c.synth.passes);
  kv["synth_frame_rate_hz"] = format_fixed(c.synth.frame_rate_hz, 4);
  kv["synth_speed_min_cm_s"] = format_fixed(c.synth.speed_min_cm_s, 4);
  kv["synth_speed_max_cm_s"] = format_fixed(c.synth.speed_max_cm_s, 4);
  kv["synth_texture_richness"] = format_fixed(c.synth.texture_richness, 4);
  kv["synth_noise_level"] = format_fixed(c.synth.noise_level, 4);
  kv["synth_pass_jitter"] = format_fixed(c.synth.pass_jitter, 4);
  kv["synth_landmark_count"] = std::to_string(c.synth.landmark_count);
  kv["synth_devices"] = detail::join_strings(c.synth.devices);
  std::string text;
  for (const auto& [k, v] : kv) text += k + "=" + v + "\n";
  return text;
}

/// Hash over the snapshot minus keys that must not influence results
/// (paths, worker count, cache toggle). Stamped into CSV headers.
inline std::string config_hash_hex(const RunConfig& c) {
  std::istringstream in(resolved_config_text(c));
  Hasher h;
  std::string line;
  while (std::getline(in, line)) {
    if (starts_with(line, "jobs=") || starts_with(line, "cache=") ||
        starts_with(line, "out_dir=") || starts_with(line, "dataset_root="))
      continue;
    h.str(line);
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h.digest()));
  return std::string(buf);
}

/// The cartesian evaluation plan: methods x applicable encodings x
/// metrics, with the configured codebook size per encoding.
struct EvalJob {
  Method method;
  Encoding encoding;
  DistanceMetric metric;
  int K = 0;
};

inline std::vector<EvalJob> eval_jobs(const RunConfig& c) {
  std::vector<EvalJob> jobs;
  for (Method m : c.methods) {
    std::vector<Encoding> encs;
    if (m == Method::LW_COLOR) {
      encs = {Encoding::DIRECT};  // single whole-frame descriptor
    } else {
      for (Encoding e : c.encodings)
        if (e != Encoding::DIRECT) encs.push_back(e);
    }
    for (Encoding e : encs) {
      int K = e == Encoding::HA ? c.ha_k : (e == Encoding::VLAD ? c.vlad_k : 0);
      if (e == Encoding::HA) {
        for (DistanceMetric metric : c.metrics) jobs.push_back({m, e, metric, K});
      } else {
        // VLAD and DIRECT codes are signed; chi-squared is defined on
        // non-negative histograms only, so these always pair with Hellinger.
        jobs.push_back({m, e, DistanceMetric::Hellinger, K});
      }
    }
  }
  return jobs;
}

inline EvalConfig make_eval_config(const RunConfig& c, const EvalJob& job,
                                   const std::string& work_dir) {
  EvalConfig ec;
  ec.method = job.method;
  ec.encoding = job.encoding;
  ec.metric = job.metric;
  ec.K = job.K;
  ec.trials = c.trials;
  ec.seed = c.seed;
  ec.split = c.split;
  ec.cdf_range_cm = c.cdf_range_cm;
  ec.train_cap = c.train_cap;
  ec.kmeans_max_iters = c.kmeans_max_iters;
  ec.query_stride = c.query_stride;
  ec.dictionary_scope = c.dictionary_scope;
  ec.jobs = c.jobs;
  ec.work_dir = work_dir;
  return ec;
}

}  // namespace vpr
