#pragma once

// Shared fixtures for the unit suites: temp directories, deterministic
// plane/frame/journey generators, and a small corridor spec that keeps
// synthetic corpora fast to render.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "vpr/journey.hpp"
#include "vpr/plane.hpp"
#include "vpr/rng.hpp"
#include "vpr/synth.hpp"

namespace testutil {

/// Scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& hint = "vprtest") {
    auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto candidate = base / (hint + "_" + std::to_string(rd()));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("TempDir: could not create scratch directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

 private:
  std::filesystem::path path_;
};

/// Random plane with values in [0,1).
inline vpr::Plane random_plane(int h, int w, uint64_t seed) {
  vpr::Rng rng(seed);
  vpr::Plane p(h, w);
  for (auto& v : p.values) v = float(rng.uniform());
  return p;
}

/// Random plane whose values are multiples of 2^-8 in [0,1): sums of a few
/// hundred products with coarse dyadic kernel taps stay exact in double,
/// letting linearity tests assert bitwise equality.
inline vpr::Plane dyadic_plane(int h, int w, uint64_t seed) {
  vpr::Rng rng(seed);
  vpr::Plane p(h, w);
  for (auto& v : p.values) v = float(rng.uniform_index(256)) / 256.0f;
  return p;
}

/// Random kernel with taps on the 2^-6 grid in [-1,1).
inline vpr::Plane dyadic_kernel(int h, int w, uint64_t seed) {
  vpr::Rng rng(seed);
  vpr::Plane k(h, w);
  for (auto& v : k.values) v = (float(rng.uniform_index(128)) - 64.0f) / 64.0f;
  return k;
}

/// Frame with three independent random channels.
inline vpr::Frame random_frame(int h, int w, uint64_t seed, int index = 0) {
  vpr::Frame f;
  f.index = index;
  f.timestamp_ms = int64_t(index) * 100;
  f.width = w;
  f.height = h;
  for (int c = 0; c < 3; ++c) f.planes[size_t(c)] = random_plane(h, w, seed * 3 + uint64_t(c));
  return f;
}

/// Frame with every channel held at a constant level.
inline vpr::Frame constant_frame(int h, int w, float level, int index = 0) {
  vpr::Frame f;
  f.index = index;
  f.timestamp_ms = int64_t(index) * 100;
  f.width = w;
  f.height = h;
  for (int c = 0; c < 3; ++c) f.planes[size_t(c)] = vpr::Plane(h, w, level);
  return f;
}

/// Scale every channel of a frame by c (descriptor equivariance probes).
inline vpr::Frame scaled_frame(const vpr::Frame& f, float c) {
  vpr::Frame out = f;
  for (auto& plane : out.planes)
    for (auto& v : plane.values) v *= c;
  return out;
}

/// Wrap frames into a journey with 100 ms spacing and linear positions
/// from 0 to length_cm.
inline vpr::Journey journey_from_frames(std::vector<vpr::Frame> frames, const std::string& id,
                                        double length_cm = 1000.0, const std::string& corridor = "hall",
                                        const std::string& device = "cam0", int pass = 1) {
  vpr::Journey j;
  j.journey_id = id;
  j.corridor_id = corridor;
  j.device_id = device;
  j.pass_number = pass;
  const size_t n = frames.size();
  for (size_t i = 0; i < n; ++i) {
    frames[i].index = int(i);
    frames[i].timestamp_ms = int64_t(i) * 100;
    j.frame_timestamps.push_back(int64_t(i) * 100);
    j.positions_cm.push_back(n > 1 ? length_cm * double(i) / double(n - 1) : 0.0);
  }
  j.frames = std::move(frames);
  j.length_cm = length_cm;
  j.validate();
  return j;
}

/// Pixel-free journey with evenly spaced positions: enough for the
/// statistics layers, which only read positions.
inline vpr::Journey positions_journey(const std::string& id, size_t n_frames, double length_cm,
                                      const std::string& corridor = "hall",
                                      const std::string& device = "cam0", int pass = 1) {
  vpr::Journey j;
  j.journey_id = id;
  j.corridor_id = corridor;
  j.device_id = device;
  j.pass_number = pass;
  for (size_t i = 0; i < n_frames; ++i) {
    j.frame_timestamps.push_back(int64_t(i) * 100);
    j.positions_cm.push_back(n_frames > 1 ? length_cm * double(i) / double(n_frames - 1) : 0.0);
  }
  j.length_cm = length_cm;
  j.validate();
  return j;
}

/// Short corridor (~6 m, 4 Hz, 2 passes by default) that renders in well
/// under a second.
inline vpr::CorridorSpec small_corridor(const std::string& id = "hall", int passes = 2) {
  vpr::CorridorSpec spec;
  spec.corridor_id = id;
  spec.length_cm = 600.0;
  spec.passes = passes;
  spec.frame_rate_hz = 4.0;
  spec.landmark_count = 4;
  return spec;
}

}  // namespace testutil
