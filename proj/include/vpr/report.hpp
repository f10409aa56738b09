#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "vpr/bootstrap.hpp"
#include "vpr/errors.hpp"
#include "vpr/protocol.hpp"
#include "vpr/score.hpp"
#include "vpr/text.hpp"

namespace vpr {

/// One line of the summary table.
struct ReportRow {
  std::string method;
  std::string metric;
  std::string encoding;
  int K = 0;
  double mu_cm = 0.0;
  double sigma_cm = 0.0;
  double auc_min = 0.0;
  double auc_max = 0.0;
  int trials = 0;
  uint64_t seed = 0;
};

inline ReportRow make_report_row(const EvalResult& r) {
  ReportRow row;
  row.method = method_name(r.config.method);
  row.metric = metric_name(r.config.metric);
  row.encoding = encoding_name(r.config.encoding);
  row.K = r.config.encoding == Encoding::DIRECT ? 0 : r.config.K;
  row.mu_cm = r.pooled.mu;
  row.sigma_cm = r.pooled.sigma;
  row.auc_min = r.auc_min;
  row.auc_max = r.auc_max;
  row.trials = r.config.trials;
  row.seed = r.config.seed;
  return row;
}

inline ReportRow make_random_row(const EvalResult& r) {
  ReportRow row = make_report_row(r);
  row.method = "RANDOM";
  row.metric = "none";
  row.encoding = "none";
  row.K = 0;
  return row;
}

/// Sort rows by mean error ascending (best first); rows without a mean
/// sink to the bottom.
inline std::vector<ReportRow> summarize_report(std::vector<ReportRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    bool an = std::isnan(a.mu_cm), bn = std::isnan(b.mu_cm);
    if (an != bn) return bn;
    return a.mu_cm < b.mu_cm;
  });
  return rows;
}

inline void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows,
                             const std::string& stage, const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write report csv: " + path);
  out << "# stage=" << stage << " config_hash=" << config_hash << "\n";
  out << "method,metric,encoding,K,mu_cm,sigma_cm,auc_min,auc_max,trials,seed\n";
  for (const ReportRow& r : rows)
    out << r.method << ',' << r.metric << ',' << r.encoding << ',' << r.K << ','
        << format_fixed(r.mu_cm, 2) << ',' << format_fixed(r.sigma_cm, 2) << ','
        << format_fixed(r.auc_min, 6) << ',' << format_fixed(r.auc_max, 6) << ',' << r.trials
        << ',' << r.seed << "\n";
  if (!out) throw DataError("short write: " + path);
}

/// Fixed-width table for terminals; same ordering as the CSV.
inline std::string format_report_text(const std::vector<ReportRow>& rows) {
  auto pad = [](std::string s, size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  std::string text;
  text += pad("method", 10) + pad("metric", 11) + pad("encoding", 10) + pad("K", 6) +
          pad("mu_cm", 10) + pad("sigma_cm", 10) + pad("auc_min", 10) + pad("auc_max", 10) +
          pad("trials", 9) + "seed\n";
  for (const ReportRow& r : rows)
    text += pad(r.method, 10) + pad(r.metric, 11) + pad(r.encoding, 10) +
            pad(std::to_string(r.K), 6) + pad(format_fixed(r.mu_cm, 2), 10) +
            pad(format_fixed(r.sigma_cm, 2), 10) + pad(format_fixed(r.auc_min, 6), 10) +
            pad(format_fixed(r.auc_max, 6), 10) + pad(std::to_string(r.trials), 9) +
            std::to_string(r.seed) + "\n";
  return text;
}

inline void write_report_text(const std::string& path, const std::vector<ReportRow>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write report text: " + path);
  out << format_report_text(rows);
  if (!out) throw DataError("short write: " + path);
}

/// CDF curve export (plottable): error_cm,cdf over the distribution grid.
inline void write_cdf_csv(const std::string& path, const ErrorDistribution& dist,
                          const std::string& stage, const std::string& config_hash) {
  if (dist.grid.size() != dist.cdf.size() || dist.grid.empty())
    throw DataError("write_cdf_csv: distribution lacks a CDF grid");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write cdf csv: " + path);
  out << "# stage=" << stage << " config_hash=" << config_hash
      << " range_cm=" << format_fixed(dist.range_cm, 2) << " trials=" << dist.trials
      << " seed=" << dist.seed << "\n";
  out << "error_cm,cdf\n";
  for (size_t g = 0; g < dist.grid.size(); ++g)
    out << format_fixed(dist.grid[g], 4) << ',' << format_fixed(dist.cdf[g], 8) << "\n";
  if (!out) throw DataError("short write: " + path);
}

/// Ground truth vs estimate per query frame (plottable trace).
inline void write_trace_csv(const std::string& path, const std::vector<Match>& matches,
                            const std::string& stage, const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write trace csv: " + path);
  out << "# stage=" << stage << " config_hash=" << config_hash << "\n";
  out << "query_frame,truth_cm,est_cm\n";
  for (const Match& m : matches) {
    if (!m.valid) continue;
    out << m.query_frame << ',' << format_fixed(m.truth_cm, 2) << ','
        << format_fixed(m.est_cm, 2) << "\n";
  }
  if (!out) throw DataError("short write: " + path);
}

}  // namespace vpr
