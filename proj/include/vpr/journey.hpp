#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vpr/errors.hpp"
#include "vpr/plane.hpp"

namespace vpr {

/// One video frame: three [0,1] intensity planes (R,G,B).
struct Frame {
  int index = 0;
  int64_t timestamp_ms = 0;
  int width = 0;
  int height = 0;
  std::array<Plane, 3> planes;

  /// Channel-mean grayscale.
  Plane grayscale() const {
    Plane g(height, width);
    for (size_t i = 0; i < g.size(); ++i)
      g.values[i] = (planes[0].values[i] + planes[1].values[i] + planes[2].values[i]) / 3.f;
    return g;
  }
};

/// Odometer trace: cumulative distance samples keyed by timestamp.
/// The recording wheel resolves 10 cm steps.
struct GroundTruthTrack {
  static constexpr double kWheelResolutionCm = 10.0;
  std::vector<std::pair<int64_t, double>> ticks;  // (timestamp_ms, distance_cm)

  void validate() const {
    if (ticks.size() < 2) throw DataError("ground-truth track needs at least 2 ticks");
    for (size_t i = 1; i < ticks.size(); ++i) {
      if (ticks[i].first <= ticks[i - 1].first)
        throw DataError("ground-truth timestamps not strictly increasing at tick " + std::to_string(i));
      if (ticks[i].second < ticks[i - 1].second)
        throw DataError("ground-truth distances decrease at tick " + std::to_string(i));
    }
  }
};

/// Distance along the track at each frame timestamp: exact on tick
/// timestamps, linear between them, clamped to the end distances outside
/// the recorded range.
inline std::vector<double> align_ground_truth(const std::vector<int64_t>& frame_timestamps,
                                              const GroundTruthTrack& track) {
  track.validate();
  std::vector<double> out;
  out.reserve(frame_timestamps.size());
  const auto& t = track.ticks;
  for (int64_t ts : frame_timestamps) {
    if (ts <= t.front().first) {
      out.push_back(t.front().second);
      continue;
    }
    if (ts >= t.back().first) {
      out.push_back(t.back().second);
      continue;
    }
    size_t hi = 1;
    while (t[hi].first < ts) ++hi;
    if (t[hi].first == ts) {
      out.push_back(t[hi].second);
    } else {
      const auto& a = t[hi - 1];
      const auto& b = t[hi];
      double w = double(ts - a.first) / double(b.first - a.first);
      out.push_back(a.second + w * (b.second - a.second));
    }
  }
  return out;
}

/// One pass along a corridor: ordered frames plus per-frame ground-truth
/// positions. Pixel data may be unloaded (frames empty) while timestamps,
/// paths and positions stay resident; immutable once built.
struct Journey {
  std::string journey_id;
  std::string corridor_id;
  std::string device_id;
  int pass_number = 0;
  std::vector<Frame> frames;               // empty when pixels not loaded
  std::vector<int64_t> frame_timestamps;
  std::vector<std::string> frame_paths;    // absolute paths, for (re)loading
  std::vector<double> positions_cm;
  double length_cm = 0.0;

  size_t frame_count() const { return frame_timestamps.size(); }
  bool pixels_loaded() const { return frames.size() == frame_timestamps.size() && !frames.empty(); }

  void validate() const {
    if (journey_id.empty()) throw DataError("journey has empty id");
    if (positions_cm.size() != frame_timestamps.size())
      throw DataError(journey_id + ": positions/frames count mismatch");
    for (size_t i = 1; i < frame_timestamps.size(); ++i)
      if (frame_timestamps[i] <= frame_timestamps[i - 1])
        throw DataError(journey_id + ": non-monotone timestamps at frame " + std::to_string(i));
    for (size_t i = 0; i < positions_cm.size(); ++i) {
      if (positions_cm[i] < -1e-9 || positions_cm[i] > length_cm + 1e-9)
        throw DataError(journey_id + ": position out of [0, length] at frame " + std::to_string(i));
      if (i > 0 && positions_cm[i] < positions_cm[i - 1] - 1e-9)
        throw DataError(journey_id + ": positions decrease at frame " + std::to_string(i));
    }
  }
};

/// Journeys grouped by corridor.
struct Corpus {
  std::vector<Journey> journeys;

  void validate() const {
    std::map<std::string, int> seen;
    for (const auto& j : journeys) {
      j.validate();
      if (++seen[j.journey_id] > 1) throw DataError("duplicate journey id: " + j.journey_id);
    }
  }

  std::vector<std::string> corridor_ids() const {
    std::vector<std::string> ids;
    for (const auto& j : journeys)
      if (std::find(ids.begin(), ids.end(), j.corridor_id) == ids.end()) ids.push_back(j.corridor_id);
    return ids;
  }

  std::vector<const Journey*> corridor(const std::string& corridor_id) const {
    std::vector<const Journey*> out;
    for (const auto& j : journeys)
      if (j.corridor_id == corridor_id) out.push_back(&j);
    return out;
  }

  const Journey* find(const std::string& corridor_id, int pass_number) const {
    for (const auto& j : journeys)
      if (j.corridor_id == corridor_id && j.pass_number == pass_number) return &j;
    return nullptr;
  }
};

}  // namespace vpr
