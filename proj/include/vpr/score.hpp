#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "vpr/encode.hpp"
#include "vpr/errors.hpp"
#include "vpr/journey.hpp"
#include "vpr/metrics.hpp"
#include "vpr/parallel.hpp"
#include "vpr/text.hpp"

namespace vpr {

/// A journey reduced to its frame codes plus the ground-truth position of
/// each coded frame.
struct CodedJourney {
  std::string journey_id;
  std::string device_id;
  std::vector<FrameCode> codes;
  std::vector<double> positions_cm;  // aligned with codes
};

inline CodedJourney make_coded_journey(const Journey& journey, std::vector<FrameCode> codes) {
  CodedJourney cj;
  cj.journey_id = journey.journey_id;
  cj.device_id = journey.device_id;
  cj.positions_cm.reserve(codes.size());
  for (const FrameCode& c : codes) {
    if (c.frame_index < 0 || size_t(c.frame_index) >= journey.positions_cm.size())
      throw DataError("frame code index out of range for journey " + journey.journey_id);
    cj.positions_cm.push_back(journey.positions_cm[size_t(c.frame_index)]);
  }
  cj.codes = std::move(codes);
  return cj;
}

/// Dense query-by-database distance matrix. Columns are ordered by
/// (database journey id ascending, frame ascending), which makes the
/// first strict minimum of a row scan realize the documented tie-break.
struct ScoreMatrix {
  std::string query_journey_id;
  std::vector<std::string> db_journey_ids;  // ascending
  std::vector<int> query_frames;            // per row
  std::vector<uint32_t> col_journey;        // per column: index into db_journey_ids
  std::vector<int> col_frame;               // per column: frame index
  std::vector<double> col_position_cm;      // per column: ground-truth position
  size_t rows = 0, cols = 0;
  std::vector<double> values;               // rows x cols, +inf for zero-flagged codes

  double at(size_t r, size_t c) const { return values[r * cols + c]; }
};

/// Every finite entry equals the corresponding direct metric call
/// bitwise: both paths run the same scalar kernel in the same order.
inline ScoreMatrix build_score_matrix(const CodedJourney& query,
                                      const std::vector<CodedJourney>& database,
                                      DistanceMetric metric, int jobs = 1) {
  if (database.empty()) throw DataError("build_score_matrix: empty database");
  std::vector<size_t> order(database.size());
  std::iota(order.begin(), order.end(), size_t(0));
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return database[a].journey_id < database[b].journey_id;
  });

  ScoreMatrix m;
  m.query_journey_id = query.journey_id;
  m.rows = query.codes.size();
  m.query_frames.reserve(m.rows);
  for (const FrameCode& c : query.codes) m.query_frames.push_back(c.frame_index);

  struct ColRef {
    const FrameCode* code;
  };
  std::vector<ColRef> colrefs;
  for (size_t oi = 0; oi < order.size(); ++oi) {
    const CodedJourney& dj = database[order[oi]];
    m.db_journey_ids.push_back(dj.journey_id);
    for (size_t i = 0; i < dj.codes.size(); ++i) {
      m.col_journey.push_back(uint32_t(oi));
      m.col_frame.push_back(dj.codes[i].frame_index);
      m.col_position_cm.push_back(dj.positions_cm[i]);
      colrefs.push_back({&dj.codes[i]});
    }
  }
  m.cols = colrefs.size();
  if (m.cols == 0) throw DataError("build_score_matrix: database has no frame codes");
  const size_t width = colrefs.front().code->values.size();
  for (const ColRef& c : colrefs)
    if (c.code->values.size() != width)
      throw DataError("build_score_matrix: database code widths differ");

  const bool hellinger = metric == DistanceMetric::Hellinger;
  std::vector<std::vector<double>> col_mapped;
  if (hellinger) {
    col_mapped.resize(m.cols);
    for (size_t c = 0; c < m.cols; ++c) {
      col_mapped[c].resize(width);
      for (size_t i = 0; i < width; ++i)
        col_mapped[c][i] = detail::signed_sqrt(colrefs[c].code->values[i]);
    }
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  m.values.assign(m.rows * m.cols, kInf);
  parallel_tasks(m.rows, jobs, [&](size_t r) {
    const FrameCode& q = query.codes[r];
    if (q.values.size() != width)
      throw DataError("build_score_matrix: query code width differs from database");
    double* row = m.values.data() + r * m.cols;
    if (q.zero) return;  // row stays +inf
    std::vector<double> q_mapped;
    if (hellinger) {
      q_mapped.resize(width);
      for (size_t i = 0; i < width; ++i) q_mapped[i] = detail::signed_sqrt(q.values[i]);
    }
    for (size_t c = 0; c < m.cols; ++c) {
      if (colrefs[c].code->zero) continue;  // stays +inf
      row[c] = hellinger
                   ? detail::hellinger_kernel(q_mapped.data(), col_mapped[c].data(), width)
                   : detail::chi2_kernel(q.values.data(), colrefs[c].code->values.data(), width);
    }
  });
  return m;
}

/// One localized query frame.
struct Match {
  int query_frame = 0;
  bool valid = false;
  std::string db_journey_id;
  int db_frame = 0;
  double distance = 0.0;
  double est_cm = 0.0;
  double truth_cm = 0.0;
  double error_cm = 0.0;
};

/// Argmin over each row; ties resolve to the lowest database journey id,
/// then the lowest frame index (guaranteed by column order + strict <).
inline std::vector<Match> localize_matches(const ScoreMatrix& m, const CodedJourney& query) {
  if (query.codes.size() != m.rows)
    throw DataError("localize_matches: query does not match score matrix");
  std::vector<Match> out(m.rows);
  for (size_t r = 0; r < m.rows; ++r) {
    const double* row = m.values.data() + r * m.cols;
    size_t best = m.cols;
    double best_v = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < m.cols; ++c)
      if (row[c] < best_v) {
        best_v = row[c];
        best = c;
      }
    Match& match = out[r];
    match.query_frame = m.query_frames[r];
    match.truth_cm = query.positions_cm[r];
    if (best == m.cols) continue;  // all +inf: unmatchable frame
    match.valid = true;
    match.db_journey_id = m.db_journey_ids[m.col_journey[best]];
    match.db_frame = m.col_frame[best];
    match.distance = best_v;
    match.est_cm = m.col_position_cm[best];
    match.error_cm = std::fabs(match.est_cm - match.truth_cm);
  }
  return out;
}

/// Full score-matrix export: one CSV row per query frame, one column per
/// database frame, plus a companion map file naming each column.
inline void write_score_matrix_csv(const std::string& matrix_path, const std::string& map_path,
                                   const ScoreMatrix& m, const std::string& stage,
                                   const std::string& config_hash) {
  {
    std::ofstream out(matrix_path);
    if (!out) throw DataError("cannot write score matrix csv: " + matrix_path);
    out << "# stage=" << stage << " config_hash=" << config_hash << "\n";
    out << "query_frame";
    for (size_t c = 0; c < m.cols; ++c) out << ",c" << c;
    out << "\n";
    for (size_t r = 0; r < m.rows; ++r) {
      out << m.query_frames[r];
      const double* row = m.values.data() + r * m.cols;
      for (size_t c = 0; c < m.cols; ++c) {
        out << ',';
        if (std::isinf(row[c])) out << "inf";
        else out << format_sci(row[c], 10);
      }
      out << "\n";
    }
    if (!out) throw DataError("short write: " + matrix_path);
  }
  std::ofstream map(map_path);
  if (!map) throw DataError("cannot write score matrix map: " + map_path);
  map << "# stage=" << stage << " config_hash=" << config_hash << "\n";
  map << "column,db_journey,db_frame,position_cm\n";
  for (size_t c = 0; c < m.cols; ++c)
    map << 'c' << c << ',' << m.db_journey_ids[m.col_journey[c]] << ',' << m.col_frame[c] << ','
        << format_fixed(m.col_position_cm[c], 2) << "\n";
  if (!map) throw DataError("short write: " + map_path);
}

/// Diagnostic top-k neighbours per query frame (not used by the
/// localization protocol, which takes the single argmin).
inline void write_topk_csv(const std::string& path, const ScoreMatrix& m, int k,
                           const std::string& stage, const std::string& config_hash) {
  if (k < 1) throw DataError("write_topk_csv: k must be >= 1");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write topk csv: " + path);
  out << "# stage=" << stage << " config_hash=" << config_hash << "\n";
  out << "query_frame,rank,db_journey,db_frame,distance\n";
  std::vector<size_t> order(m.cols);
  for (size_t r = 0; r < m.rows; ++r) {
    const double* row = m.values.data() + r * m.cols;
    std::iota(order.begin(), order.end(), size_t(0));
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return row[a] < row[b]; });
    int limit = std::min<int>(k, int(m.cols));
    for (int rank = 0; rank < limit; ++rank) {
      size_t c = order[size_t(rank)];
      if (std::isinf(row[c])) break;
      out << m.query_frames[r] << ',' << (rank + 1) << ','
          << m.db_journey_ids[m.col_journey[c]] << ',' << m.col_frame[c] << ','
          << format_sci(row[c], 10) << "\n";
    }
  }
  if (!out) throw DataError("short write: " + path);
}

/// Match table export; skips frames with no finite database entry.
inline void write_matches_csv(const std::string& path, const std::vector<Match>& matches,
                              const std::string& stage, const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write matches csv: " + path);
  out << "# stage=" << stage << " config_hash=" << config_hash << "\n";
  out << "query_frame,db_journey,db_frame,distance,est_cm,truth_cm,error_cm\n";
  for (const Match& m : matches) {
    if (!m.valid) continue;
    out << m.query_frame << ',' << m.db_journey_id << ',' << m.db_frame << ','
        << format_sci(m.distance, 10) << ',' << format_fixed(m.est_cm, 2) << ','
        << format_fixed(m.truth_cm, 2) << ',' << format_fixed(m.error_cm, 2) << "\n";
  }
  if (!out) throw DataError("short write: " + path);
}

}  // namespace vpr
