#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vpr/descriptor.hpp"
#include "vpr/dsift.hpp"
#include "vpr/journey.hpp"
#include "vpr/lw_color.hpp"
#include "vpr/parallel.hpp"
#include "vpr/sf_gabor.hpp"
#include "vpr/st_gabor.hpp"
#include "vpr/st_gauss.hpp"

namespace vpr {

/// Eligible record centers for a journey/method pair: every frame for
/// single-frame methods, every full-window center for temporal ones.
inline std::vector<int> eligible_centers(size_t frame_count, Method method) {
  int win = method_window(method);
  int n = int(frame_count);
  if (n < win)
    throw DataError("journey of " + std::to_string(n) + " frames shorter than the " +
                    std::to_string(win) + "-frame window of " + method_name(method));
  int half = win / 2;
  std::vector<int> centers;
  centers.reserve(size_t(n - win + 1));
  for (int c = half; c < n - half; ++c) centers.push_back(c);
  return centers;
}

/// Extract all descriptors of a journey and stream them to a dump file,
/// one record per eligible frame in frame order. Frames fan out to `jobs`
/// workers in fixed slabs; records are appended in center order, so the
/// dump bytes do not depend on the worker count. Returns records written.
inline int extract_journey_to_dump(const Journey& journey, Method method,
                                   const std::string& dump_path, int jobs = 1) {
  if (!journey.pixels_loaded())
    throw DataError(journey.journey_id + ": frames not loaded for extraction");
  const std::vector<int> centers = eligible_centers(journey.frame_count(), method);
  const size_t n = journey.frame_count();

  // Per-frame precomputations shared across overlapping windows.
  std::vector<std::pair<Plane, Plane>> gauss_grads;
  std::vector<Plane> grays;
  std::vector<LwFrameSums> lw_sums;
  switch (method) {
    case Method::ST_GAUSS:
      gauss_grads.resize(n);
      parallel_tasks(n, jobs, [&](size_t i) {
        gauss_grads[i] = st_gauss_gradients(journey.frames[i].grayscale());
      });
      break;
    case Method::ST_GABOR:
      grays.resize(n);
      parallel_tasks(n, jobs, [&](size_t i) { grays[i] = journey.frames[i].grayscale(); });
      break;
    case Method::LW_COLOR:
      lw_sums.resize(n);
      parallel_tasks(n, jobs, [&](size_t i) { lw_sums[i] = lw_frame_sums(journey.frames[i]); });
      break;
    default:
      break;
  }

  auto compute = [&](int center) -> DescriptorSet {
    const int half = method_window(method) / 2;
    switch (method) {
      case Method::SIFT:
        return dsift_frame(journey.frames[size_t(center)]);
      case Method::SF_GABOR:
        return sf_gabor_frame(journey.frames[size_t(center)]);
      case Method::ST_GAUSS: {
        std::vector<const Plane*> gxs, gys;
        for (int i = center - half; i <= center + half; ++i) {
          gxs.push_back(&gauss_grads[size_t(i)].first);
          gys.push_back(&gauss_grads[size_t(i)].second);
        }
        return st_gauss_from_gradients(gxs, gys, center);
      }
      case Method::ST_GABOR: {
        std::vector<const Plane*> win;
        for (int i = center - half; i <= center + half; ++i) win.push_back(&grays[size_t(i)]);
        return st_gabor_from_grays(win, center);
      }
      case Method::LW_COLOR: {
        std::vector<const LwFrameSums*> win;
        for (int i = center - half; i <= center + half; ++i) win.push_back(&lw_sums[size_t(i)]);
        std::array<double, 144> d = lw_color_from_sums(win);
        DescriptorSet set;
        set.method = Method::LW_COLOR;
        set.frame_index = center;
        set.support = 0;
        set.dim = 144;
        set.grid = {{journey.frames[size_t(center)].width / 2, journey.frames[size_t(center)].height / 2}};
        set.data.resize(144);
        for (size_t i = 0; i < d.size(); ++i) set.data[i] = float(d[i]);
        return set;
      }
    }
    throw std::logic_error("unknown method");
  };

  DescriptorDumpWriter writer(dump_path);
  constexpr size_t kSlab = 16;  // bounds resident descriptor memory
  int written = 0;
  for (size_t slab = 0; slab < centers.size(); slab += kSlab) {
    size_t end = std::min(centers.size(), slab + kSlab);
    std::vector<DescriptorSet> results(end - slab);
    parallel_tasks(end - slab, jobs, [&](size_t i) {
      results[i] = compute(centers[slab + i]);
      results[i].validate();
    });
    for (const auto& set : results) {
      writer.append(set);
      ++written;
    }
  }
  writer.close();
  return written;
}

/// In-memory extraction of a whole journey (small corpora and tests).
inline std::vector<DescriptorSet> extract_journey(const Journey& journey, Method method) {
  if (!journey.pixels_loaded())
    throw DataError(journey.journey_id + ": frames not loaded for extraction");
  std::vector<DescriptorSet> out;
  if (method_window(method) == 1) {
    for (const Frame& f : journey.frames)
      out.push_back(method == Method::SIFT ? dsift_frame(f) : sf_gabor_frame(f));
    return out;
  }
  for (const TemporalWindow& w : temporal_window_stream(journey, method_window(method))) {
    if (method == Method::ST_GAUSS) out.push_back(st_gauss_window(w));
    else if (method == Method::ST_GABOR) out.push_back(st_gabor_window(w));
    else out.push_back(lw_color_window(w));
  }
  return out;
}

}  // namespace vpr
