#pragma once

#include <cmath>
#include <vector>

#include "vpr/descriptor.hpp"
#include "vpr/journey.hpp"
#include "vpr/kernels.hpp"
#include "vpr/pooling.hpp"

namespace vpr {

namespace detail {

inline const GaborBank2D& sf_gabor_bank() {
  static const GaborBank2D bank = build_gabor_bank_2d();
  return bank;
}

inline const PoolPlan& sf_gabor_plan() {
  static const PoolPlan plan = make_pool_plan(11);
  return plan;
}

inline void l2_normalize_rows(std::vector<float>& data, size_t count, int dim) {
  for (size_t g = 0; g < count; ++g) {
    float* d = data.data() + g * size_t(dim);
    double norm2 = 0.0;
    for (int k = 0; k < dim; ++k) norm2 += double(d[k]) * d[k];
    if (norm2 < 1e-24) continue;  // zero-guard: all-zero descriptors stay zero
    float inv = float(1.0 / std::sqrt(norm2));
    for (int k = 0; k < dim; ++k) d[k] *= inv;
  }
}

}  // namespace detail

/// Single-frame pooled Gabor: 8 rectified odd-Gabor planes, each pooled by
/// the 17 log-polar masks, sampled on the shared stride-3 grid.
/// Layout: d[region*8 + orientation].
inline DescriptorSet sf_gabor_plane(const Plane& gray, int frame_index, bool normalize = true) {
  const auto& bank = detail::sf_gabor_bank();
  const auto& plan = detail::sf_gabor_plan();

  std::vector<Plane> fields = convolve_bank_gemm(gray, bank.kernels);
  for (auto& f : fields)
    for (auto& v : f.values) v = std::fabs(v);

  DescriptorSet set;
  set.method = Method::SF_GABOR;
  set.frame_index = frame_index;
  set.support = plan.support;
  set.dim = method_dim(Method::SF_GABOR);
  set.grid = dense_grid(gray.height, gray.width);
  set.data = pool_fields(fields, plan, set.grid);
  if (normalize) detail::l2_normalize_rows(set.data, set.grid.size(), set.dim);
  return set;
}

inline DescriptorSet sf_gabor_frame(const Frame& frame, bool normalize = true) {
  return sf_gabor_plane(frame.grayscale(), frame.index, normalize);
}

}  // namespace vpr
