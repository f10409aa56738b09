#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "vpr/convolve.hpp"
#include "vpr/descriptor.hpp"
#include "vpr/kernels.hpp"
#include "vpr/pooling.hpp"
#include "vpr/sf_gabor.hpp"
#include "vpr/temporal.hpp"

namespace vpr {

namespace detail {

inline const DerivativeKernels& derivative_kernels() {
  static const DerivativeKernels k = gaussian_kernels();
  return k;
}

inline const PoolPlan& st_gauss_plan() {
  static const PoolPlan plan = make_pool_plan(11);
  return plan;
}

}  // namespace detail

/// 8 orientation bins centered on multiples of pi/4.
inline int orientation_bin_8(double theta) {
  int b = int(std::floor((theta + kPi / 8.0) / (kPi / 4.0)));
  return ((b % 8) + 8) % 8;
}

/// Per-frame spatial gradients: 5x5 derivative-of-Gaussian along x and y.
inline std::pair<Plane, Plane> st_gauss_gradients(const Plane& gray) {
  const auto& k = detail::derivative_kernels();
  return {convolve2d(gray, k.dog_x), convolve2d(gray, k.dog_y)};
}

/// Magnitude votes of the temporally smoothed central-frame gradient,
/// split into 8 orientation-bin planes. Exposed so vote conservation
/// (bin planes partition the magnitude plane) is independently checkable.
inline std::vector<Plane> st_gauss_vote_planes(const std::vector<const Plane*>& gx_window,
                                               const std::vector<const Plane*>& gy_window) {
  const auto& k = detail::derivative_kernels();
  const size_t len = k.temporal_gauss.size();
  if (gx_window.size() != len || gy_window.size() != len)
    throw std::invalid_argument("st_gauss_vote_planes: window must have 11 gradient pairs");
  const int H = gx_window[0]->height, W = gx_window[0]->width;

  // Temporally smoothed gradients of the central frame.
  Plane gx(H, W), gy(H, W);
  for (size_t i = 0; i < gx.size(); ++i) {
    double ax = 0.0, ay = 0.0;
    for (size_t t = 0; t < len; ++t) {
      ax += double(k.temporal_gauss[t]) * gx_window[t]->values[i];
      ay += double(k.temporal_gauss[t]) * gy_window[t]->values[i];
    }
    gx.values[i] = float(ax);
    gy.values[i] = float(ay);
  }

  std::vector<Plane> bins(8, Plane(H, W));
  for (size_t i = 0; i < gx.size(); ++i) {
    float dx = gx.values[i], dy = gy.values[i];
    float m = std::sqrt(dx * dx + dy * dy);
    if (m == 0.f) continue;
    bins[size_t(orientation_bin_8(std::atan2(double(dy), double(dx))))].values[i] = m;
  }
  return bins;
}

/// Combine 11 per-frame gradient plane pairs (window order, oldest first)
/// into the descriptor set of the central frame: temporal Gaussian
/// smoothing, magnitude-weighted 8-bin orientation votes, pooled by the 17
/// masks on the shared grid. Layout: d[region*8 + bin].
inline DescriptorSet st_gauss_from_gradients(const std::vector<const Plane*>& gx_window,
                                             const std::vector<const Plane*>& gy_window,
                                             int center_frame_index, bool normalize = true) {
  const auto& plan = detail::st_gauss_plan();
  std::vector<Plane> bins = st_gauss_vote_planes(gx_window, gy_window);
  const int H = bins[0].height, W = bins[0].width;

  DescriptorSet set;
  set.method = Method::ST_GAUSS;
  set.frame_index = center_frame_index;
  set.support = plan.support;
  set.dim = method_dim(Method::ST_GAUSS);
  set.grid = dense_grid(H, W);
  set.data = pool_fields(bins, plan, set.grid);
  if (normalize) detail::l2_normalize_rows(set.data, set.grid.size(), set.dim);
  return set;
}

/// Space-time Gaussian-derivative descriptors for an 11-frame window.
inline DescriptorSet st_gauss_window(const TemporalWindow& window, bool normalize = true) {
  if (window.length != 11) throw std::invalid_argument("st_gauss_window: window length must be 11");
  std::vector<std::pair<Plane, Plane>> grads;
  grads.reserve(size_t(window.length));
  for (const Frame* f : window.frames) grads.push_back(st_gauss_gradients(f->grayscale()));
  std::vector<const Plane*> gxs, gys;
  for (auto& g : grads) {
    gxs.push_back(&g.first);
    gys.push_back(&g.second);
  }
  return st_gauss_from_gradients(gxs, gys, window.center, normalize);
}

}  // namespace vpr
