#pragma once

#include <cmath>
#include <vector>

#include "vpr/convolve.hpp"
#include "vpr/descriptor.hpp"
#include "vpr/kernels.hpp"
#include "vpr/pooling.hpp"
#include "vpr/sf_gabor.hpp"
#include "vpr/st_gauss.hpp"
#include "vpr/temporal.hpp"

namespace vpr {

namespace detail {

inline const PoolPlan& st_gabor_plan() {
  static const PoolPlan plan = make_pool_plan(16);
  return plan;
}

}  // namespace detail

/// 13-bin partition of the direction sphere by elevation band:
///   bin 0 / 1: polar caps (el > 60deg / el < -60deg)
///   bins 2,3 / 4,5: mid bands (20deg < |el| <= 60deg), split at azimuth 0
///   bins 6..12: equatorial band (|el| <= 20deg), 7 uniform azimuth bins.
inline int direction_bin_13(double azimuth, double elevation) {
  constexpr double kHigh = kPi / 3.0;  // 60 degrees
  constexpr double kLow = kPi / 9.0;   // 20 degrees
  if (elevation > kHigh) return 0;
  if (elevation < -kHigh) return 1;
  if (elevation > kLow) return azimuth < 0.0 ? 2 : 3;
  if (elevation < -kLow) return azimuth < 0.0 ? 4 : 5;
  int a = int((azimuth + kPi) / (2.0 * kPi / 7.0));
  if (a > 6) a = 6;  // azimuth == +pi
  if (a < 0) a = 0;
  return 6 + a;
}

/// Direction-vector magnitude votes split into the 13 bin planes.
/// Exposed so vote conservation (bin planes partition the magnitude
/// plane) is independently checkable.
inline std::vector<Plane> st_gabor_vote_planes(const std::vector<const Plane*>& grays) {
  const auto& k = detail::derivative_kernels();
  if (grays.size() != k.gabor_time.size())
    throw std::invalid_argument("st_gabor_vote_planes: window must have 9 planes");

  const Plane& central = *grays[grays.size() / 2];
  Plane gx = convolve_rows(central, k.gabor_space);
  Plane gy = convolve_cols(central, k.gabor_space);

  const int H = central.height, W = central.width;
  Plane gt(H, W);
  for (size_t i = 0; i < gt.size(); ++i) {
    double acc = 0.0;
    for (size_t t = 0; t < grays.size(); ++t) acc += double(k.gabor_time[t]) * grays[t]->values[i];
    gt.values[i] = float(acc);
  }

  std::vector<Plane> bins(13, Plane(H, W));
  for (size_t i = 0; i < gt.size(); ++i) {
    double dx = gx.values[i], dy = gy.values[i], dt = gt.values[i];
    double m = std::sqrt(dx * dx + dy * dy + dt * dt);
    if (m == 0.0) continue;
    double az = std::atan2(dy, dx);
    double el = std::atan2(dt, std::sqrt(dx * dx + dy * dy));
    bins[size_t(direction_bin_13(az, el))].values[i] = float(m);
  }
  return bins;
}

/// Space-time Gabor descriptors from 9 grayscale planes (window order,
/// oldest first): antisymmetric 1-D Gabor responses along x and y on the
/// central plane and along t across the window give a per-pixel direction
/// vector; its length votes into the 13 direction bins, pooled over 16x16
/// patches by the 17 masks. Layout: d[region*13 + bin].
inline DescriptorSet st_gabor_from_grays(const std::vector<const Plane*>& grays,
                                         int center_frame_index, bool normalize = true) {
  const PoolPlan& plan = detail::st_gabor_plan();
  std::vector<Plane> bins = st_gabor_vote_planes(grays);
  const int H = bins[0].height, W = bins[0].width;

  DescriptorSet set;
  set.method = Method::ST_GABOR;
  set.frame_index = center_frame_index;
  set.support = plan.support;
  set.dim = method_dim(Method::ST_GABOR);
  set.grid = dense_grid(H, W);
  set.data = pool_fields(bins, plan, set.grid);
  if (normalize) detail::l2_normalize_rows(set.data, set.grid.size(), set.dim);
  return set;
}

/// Space-time Gabor descriptors for a 9-frame window.
inline DescriptorSet st_gabor_window(const TemporalWindow& window, bool normalize = true) {
  std::vector<Plane> grays;
  grays.reserve(window.frames.size());
  for (const Frame* f : window.frames) grays.push_back(f->grayscale());
  std::vector<const Plane*> ptrs;
  for (const auto& g : grays) ptrs.push_back(&g);
  return st_gabor_from_grays(ptrs, window.center, normalize);
}

}  // namespace vpr
