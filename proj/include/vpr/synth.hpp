#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "vpr/errors.hpp"
#include "vpr/hash.hpp"
#include "vpr/image_io.hpp"
#include "vpr/journey.hpp"
#include "vpr/manifest.hpp"
#include "vpr/rng.hpp"

namespace vpr {

/// Parameters for one synthetic corridor. A corridor is rendered as a
/// camera translating past a procedurally textured wall; the texture is
/// keyed to longitudinal position so appearance identifies location.
struct CorridorSpec {
  std::string corridor_id = "corridor0";
  double length_cm = 3000.0;
  int passes = 3;
  double frame_rate_hz = 10.0;
  double speed_min_cm_s = 55.0;
  double speed_max_cm_s = 95.0;
  double texture_richness = 1.0;  // 0 = blank walls (position-uninformative)
  double noise_level = 0.01;      // per-pixel sensor noise amplitude
  double pass_jitter = 1.0;       // scales per-pass gain/lateral variation
  int landmark_count = 12;        // high-contrast wall stripes
  std::vector<std::string> devices = {"cam0"};  // cycled across passes

  void validate() const {
    if (length_cm <= 0) throw DataError(corridor_id + ": non-positive corridor length");
    if (passes <= 0) throw DataError(corridor_id + ": non-positive pass count");
    if (frame_rate_hz <= 0) throw DataError(corridor_id + ": non-positive frame rate");
    if (speed_min_cm_s <= 0 || speed_max_cm_s < speed_min_cm_s)
      throw DataError(corridor_id + ": bad walking-speed range");
    if (texture_richness < 0 || noise_level < 0 || pass_jitter < 0)
      throw DataError(corridor_id + ": negative richness/noise/jitter");
    if (devices.empty()) throw DataError(corridor_id + ": empty device list");
  }
};

struct SyntheticJourney {
  Journey journey;
  GroundTruthTrack track;
};

namespace detail {

inline double smoothstep(double f) { return f * f * (3.0 - 2.0 * f); }

/// Band-limited value noise over global coordinates (u in cm along the
/// corridor, v in pixel rows), plus sparse high-contrast landmark stripes.
/// Two frames rendered at the same position see the same wall.
struct WallTexture {
  uint64_t seed = 0;
  double richness = 1.0;
  double length_cm = 0.0;
  int landmark_count = 0;

  static constexpr int kOctaves = 4;
  // Cell sizes per octave: cm horizontally, pixel rows vertically.
  static constexpr double kCellU[kOctaves] = {48.0, 24.0, 12.0, 6.0};
  static constexpr double kCellV[kOctaves] = {52.0, 26.0, 13.0, 6.5};
  static constexpr double kAmp[kOctaves] = {0.50, 0.28, 0.16, 0.09};

  double lattice(int octave, int channel, int64_t ui, int64_t vi) const {
    return hash_to_unit(seed, uint64_t(octave * 3 + channel) + 1, uint64_t(ui), uint64_t(vi));
  }

  /// Landmark stripe blend at longitudinal position u: opacity plus the
  /// stripe color. Weakened proportionally when richness drops below 1.
  void landmark(double u, double& opacity, double color[3]) const {
    opacity = 0.0;
    color[0] = color[1] = color[2] = 0.0;
    double scale = richness < 1.0 ? richness : 1.0;
    if (scale <= 0.0) return;
    for (int i = 0; i < landmark_count; ++i) {
      double center = hash_to_unit(seed, 9001, uint64_t(i)) * length_cm;
      double half = 0.5 * (14.0 + 12.0 * hash_to_unit(seed, 9002, uint64_t(i)));
      double dist = std::fabs(u - center);
      if (dist >= half) continue;
      double s = smoothstep(1.0 - dist / half) * 0.85 * scale;
      if (s > opacity) {
        opacity = s;
        for (int c = 0; c < 3; ++c) color[c] = hash_to_unit(seed, 9003, uint64_t(i), uint64_t(c));
      }
    }
  }

  /// Render the wall patch seen from longitudinal position p_cm with a
  /// vertical offset of lateral_px rows. Hash lookups happen on small
  /// per-octave lattice windows; pixels interpolate from those.
  std::array<Plane, 3> render(int height, int width, double p_cm, double cm_per_px,
                              double lateral_px) const {
    std::array<Plane, 3> planes;
    for (auto& pl : planes) pl = Plane(height, width);

    std::vector<double> u(static_cast<size_t>(width));
    for (int x = 0; x < width; ++x) u[size_t(x)] = p_cm + (double(x) - width / 2.0) * cm_per_px;

    // Per-column landmark blend (independent of row and channel opacity).
    std::vector<double> lm_op(static_cast<size_t>(width));
    std::vector<std::array<double, 3>> lm_color(static_cast<size_t>(width));
    for (int x = 0; x < width; ++x) {
      double color[3];
      landmark(u[size_t(x)], lm_op[size_t(x)], color);
      lm_color[size_t(x)] = {color[0], color[1], color[2]};
    }

    for (int o = 0; o < kOctaves; ++o) {
      // Column/row lattice coordinates for this octave.
      std::vector<int64_t> ci(static_cast<size_t>(width));
      std::vector<float> cw(static_cast<size_t>(width));
      for (int x = 0; x < width; ++x) {
        double fu = u[size_t(x)] / kCellU[o];
        ci[size_t(x)] = int64_t(std::floor(fu));
        cw[size_t(x)] = float(smoothstep(fu - double(ci[size_t(x)])));
      }
      std::vector<int64_t> ri(static_cast<size_t>(height));
      std::vector<float> rw(static_cast<size_t>(height));
      for (int y = 0; y < height; ++y) {
        double fv = (double(y) + lateral_px) / kCellV[o];
        ri[size_t(y)] = int64_t(std::floor(fv));
        rw[size_t(y)] = float(smoothstep(fv - double(ri[size_t(y)])));
      }
      int64_t c0 = ci.front(), c1 = ci.back() + 1;
      int64_t r0 = ri.front(), r1 = ri.back() + 1;
      int ncols = int(c1 - c0) + 1, nrows = int(r1 - r0) + 1;

      for (int c = 0; c < 3; ++c) {
        // Lattice window covering the whole frame for this octave/channel.
        std::vector<float> win(size_t(nrows) * ncols);
        for (int rr = 0; rr < nrows; ++rr)
          for (int cc = 0; cc < ncols; ++cc)
            win[size_t(rr) * ncols + cc] = float(lattice(o, c, c0 + cc, r0 + rr));
        float amp = float(kAmp[o] * richness);
        for (int y = 0; y < height; ++y) {
          const float* top = &win[size_t(ri[size_t(y)] - r0) * ncols];
          const float* bot = top + ncols;
          float wv = rw[size_t(y)];
          float* out = planes[c].row(y);
          for (int x = 0; x < width; ++x) {
            int cc = int(ci[size_t(x)] - c0);
            float wu = cw[size_t(x)];
            float a = top[cc] * (1 - wu) + top[cc + 1] * wu;
            float b = bot[cc] * (1 - wu) + bot[cc + 1] * wu;
            out[x] += amp * (a * (1 - wv) + b * wv - 0.5f);
          }
        }
      }
    }

    for (int c = 0; c < 3; ++c)
      for (int y = 0; y < height; ++y) {
        float* out = planes[c].row(y);
        for (int x = 0; x < width; ++x) {
          double val = 0.5 + double(out[x]);
          double op = lm_op[size_t(x)];
          if (op > 0.0) val = val * (1 - op) + lm_color[size_t(x)][c] * op;
          out[x] = float(val < 0.0 ? 0.0 : (val > 1.0 ? 1.0 : val));
        }
      }
    return planes;
  }
};

// Piecewise-linear walking-speed profile with knots every kKnotDt seconds.
struct SpeedProfile {
  static constexpr double kKnotDt = 2.0;
  std::vector<double> knots;

  double at(double t) const {
    double f = t / kKnotDt;
    size_t i = size_t(f < 0 ? 0 : f);
    if (i + 1 >= knots.size()) return knots.back();
    double w = f - double(i);
    return knots[i] * (1 - w) + knots[i + 1] * w;
  }
};

}  // namespace detail

/// Render every pass of one corridor. Deterministic in (spec, seed):
/// texture and landmarks depend only on (seed, corridor_id); per-pass
/// speed/gain/lateral jitter and sensor noise come from pass substreams.
inline std::vector<SyntheticJourney> synthesize_corridor(const CorridorSpec& spec, uint64_t seed) {
  spec.validate();
  uint64_t corridor_seed = splitmix64(seed ^ Hasher().str(spec.corridor_id).digest());

  detail::WallTexture wall;
  wall.seed = corridor_seed;
  wall.richness = spec.texture_richness;
  wall.length_cm = spec.length_cm;
  wall.landmark_count = spec.landmark_count;

  const double dt = 1.0 / spec.frame_rate_hz;
  const double cm_per_px = 100.0 / double(kFrameWidth);  // frame spans ~1 m of wall
  const double tick_cm = GroundTruthTrack::kWheelResolutionCm;

  std::vector<SyntheticJourney> out;
  out.reserve(size_t(spec.passes));
  for (int pass = 0; pass < spec.passes; ++pass) {
    Rng rng = Rng::substream(corridor_seed, uint64_t(pass) + 1);
    detail::SpeedProfile speed;
    double max_duration = spec.length_cm / spec.speed_min_cm_s;
    size_t knot_count = size_t(max_duration / detail::SpeedProfile::kKnotDt) + 3;
    speed.knots.reserve(knot_count);
    for (size_t i = 0; i < knot_count; ++i)
      speed.knots.push_back(rng.uniform(spec.speed_min_cm_s, spec.speed_max_cm_s));
    double gain = 1.0 + spec.pass_jitter * rng.uniform(-0.12, 0.12);
    double lateral_px = spec.pass_jitter * rng.uniform(-4.0, 4.0);
    uint64_t noise_seed = splitmix64(corridor_seed ^ (uint64_t(pass) * 0x9e3779b97f4a7c15ULL + 17));

    SyntheticJourney sj;
    Journey& j = sj.journey;
    j.journey_id = spec.corridor_id + "_p" + std::to_string(pass);
    j.corridor_id = spec.corridor_id;
    j.device_id = spec.devices[size_t(pass) % spec.devices.size()];
    j.pass_number = pass;
    j.length_cm = spec.length_cm;

    GroundTruthTrack& track = sj.track;
    int64_t last_tick_ts = -1;
    auto push_tick = [&](double t_s, double d_cm) {
      int64_t ts = llround(t_s * 1000.0);
      if (ts <= last_tick_ts) ts = last_tick_ts + 1;
      last_tick_ts = ts;
      track.ticks.emplace_back(ts, d_cm);
    };
    push_tick(0.0, 0.0);

    double t = 0.0, p = 0.0;
    double next_tick_d = tick_cm;
    int64_t last_frame_ts = -1;
    int frame_index = 0;
    while (p < spec.length_cm - 1e-9) {
      Frame f;
      f.index = frame_index;
      int64_t fts = llround(t * 1000.0);
      if (fts <= last_frame_ts) fts = last_frame_ts + 1;
      last_frame_ts = fts;
      f.timestamp_ms = fts;
      f.width = kFrameWidth;
      f.height = kFrameHeight;
      f.planes = wall.render(kFrameHeight, kFrameWidth, p, cm_per_px, lateral_px);
      // Gain, sensor noise, and 8-bit quantization (so in-memory frames
      // match a written-then-reloaded corpus exactly).
      for (int c = 0; c < 3; ++c)
        for (int y = 0; y < kFrameHeight; ++y) {
          float* row = f.planes[c].row(y);
          for (int x = 0; x < kFrameWidth; ++x) {
            double val = gain * double(row[x]);
            if (spec.noise_level > 0.0)
              val += spec.noise_level *
                     (2.0 * hash_to_unit(noise_seed, uint64_t(frame_index) * 3 + uint64_t(c) + 1,
                                         uint64_t(y), uint64_t(x)) -
                      1.0);
            val = val < 0.0 ? 0.0 : (val > 1.0 ? 1.0 : val);
            row[x] = float(double(int(val * 255.0 + 0.5)) / 255.0);
          }
        }
      j.frames.push_back(std::move(f));
      j.frame_timestamps.push_back(fts);
      j.frame_paths.emplace_back();
      ++frame_index;

      double vel = speed.at(t);
      double p_next = p + vel * dt;
      double reach = p_next < spec.length_cm ? p_next : spec.length_cm;
      while (next_tick_d <= reach + 1e-9 && next_tick_d <= spec.length_cm + 1e-9) {
        push_tick(t + (next_tick_d - p) / vel, next_tick_d);
        next_tick_d += tick_cm;
      }
      if (p_next >= spec.length_cm) {
        if (track.ticks.back().second < spec.length_cm - 1e-9)
          push_tick(t + (spec.length_cm - p) / vel, spec.length_cm);
        break;
      }
      t += dt;
      p = p_next;
    }
    track.validate();
    j.positions_cm = align_ground_truth(j.frame_timestamps, track);
    j.validate();
    out.push_back(std::move(sj));
  }
  return out;
}

inline Corpus synthesize_corpus(const std::vector<CorridorSpec>& specs, uint64_t seed) {
  Corpus corpus;
  for (const auto& spec : specs)
    for (auto& sj : synthesize_corridor(spec, seed)) corpus.journeys.push_back(std::move(sj.journey));
  corpus.validate();
  return corpus;
}

/// Write one synthesized journey as frames/ + ticks.csv + journey.manifest
/// under root/<corridor>/<journey>/. Returns the manifest path.
inline std::filesystem::path write_journey(const std::filesystem::path& root, const SyntheticJourney& sj) {
  const Journey& j = sj.journey;
  if (!j.pixels_loaded()) throw DataError(j.journey_id + ": cannot write journey without pixels");
  std::filesystem::path dir = root / j.corridor_id / j.journey_id;
  std::filesystem::create_directories(dir / "frames");

  Manifest m;
  m.header.journey_id = j.journey_id;
  m.header.corridor_id = j.corridor_id;
  m.header.device_id = j.device_id;
  m.header.pass_number = j.pass_number;
  m.header.ticks_path = "ticks.csv";
  m.dir = dir;
  for (size_t i = 0; i < j.frames.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "frames/frame_%06zu.ppm", i);
    RgbImage img;
    img.width = j.frames[i].width;
    img.height = j.frames[i].height;
    img.planes = j.frames[i].planes;
    write_ppm((dir / name).string(), img);
    m.rows.push_back({int(i), j.frame_timestamps[i], name});
  }
  write_ticks(dir / "ticks.csv", sj.track);
  std::filesystem::path manifest_path = dir / "journey.manifest";
  write_manifest(manifest_path, m);
  return manifest_path;
}

/// Generate and persist a whole corpus; downstream stages then treat it
/// exactly like an ingested recording.
inline void write_synthetic_corpus(const std::filesystem::path& root,
                                   const std::vector<CorridorSpec>& specs, uint64_t seed) {
  for (const auto& spec : specs)
    for (const auto& sj : synthesize_corridor(spec, seed)) write_journey(root, sj);
}

}  // namespace vpr
