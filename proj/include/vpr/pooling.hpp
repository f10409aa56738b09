#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "vpr/kernels.hpp"
#include "vpr/plane.hpp"

namespace vpr {

/// Precomputed pooling plan: the 17 masks flipped (convolution semantics,
/// matching convolve2d) and flattened so pooled fields evaluate as one
/// patch-matrix x mask-matrix product per field plane.
struct PoolPlan {
  int support = 0;
  int anchor = 0;  // patch gathers plane(y + j - anchor, x + i - anchor)
  PoolingGeometry geometry;
  Eigen::MatrixXf masks;  // (support*support) x 17; column r = flipped mask r

  int regions() const { return int(masks.cols()); }
};

inline PoolPlan make_pool_plan(int support) {
  PoolPlan plan;
  plan.support = support;
  plan.anchor = support / 2;
  plan.geometry = build_pooling_masks(support);
  const int taps = support * support;
  plan.masks.resize(taps, Eigen::Index(plan.geometry.masks.size()));
  for (int r = 0; r < int(plan.geometry.masks.size()); ++r) {
    const Plane& m = plan.geometry.masks[size_t(r)];
    for (int j = 0; j < support; ++j)
      for (int i = 0; i < support; ++i)
        plan.masks(j * support + i, r) = m.at(support - 1 - j, support - 1 - i);
  }
  return plan;
}

/// Convolve one plane with a bank of equally-sized odd kernels in a single
/// im2col + matrix product. Accumulation runs in double like convolve2d, so
/// zero-DC kernels null constant planes to ~1e-15 instead of float-GEMM
/// noise (which would survive the descriptor normalization zero-guard).
inline std::vector<Plane> convolve_bank_gemm(const Plane& plane, const std::vector<Plane>& kernels,
                                             Border mode = Border::Mirror) {
  if (kernels.empty()) return {};
  const int kh = kernels[0].height, kw = kernels[0].width;
  if (kh % 2 == 0 || kw % 2 == 0) throw std::invalid_argument("convolve_bank_gemm: even kernel");
  for (const auto& k : kernels)
    if (k.height != kh || k.width != kw) throw std::invalid_argument("convolve_bank_gemm: mixed kernel sizes");
  const int ry = kh / 2, rx = kw / 2;
  const int H = plane.height, W = plane.width;
  const int taps = kh * kw;
  const int K = int(kernels.size());

  Eigen::MatrixXd patches(H * W, taps);
  for (int y = 0; y < H; ++y) {
    bool y_in = (y - ry >= 0) && (y + ry < H);
    for (int x = 0; x < W; ++x) {
      if (y_in && x - rx >= 0 && x + rx < W) {
        for (int j = 0; j < kh; ++j) {
          const float* src = plane.row(y - ry + j) + (x - rx);
          for (int i = 0; i < kw; ++i) patches(y * W + x, j * kw + i) = double(src[i]);
        }
      } else {
        for (int j = 0; j < kh; ++j)
          for (int i = 0; i < kw; ++i)
            patches(y * W + x, j * kw + i) = double(sample_border(plane, y - ry + j, x - rx + i, mode));
      }
    }
  }
  Eigen::MatrixXd km(taps, K);
  for (int k = 0; k < K; ++k)
    for (int j = 0; j < kh; ++j)
      for (int i = 0; i < kw; ++i) km(j * kw + i, k) = double(kernels[size_t(k)].at(kh - 1 - j, kw - 1 - i));
  Eigen::MatrixXd res = patches * km;  // (H*W) x K
  std::vector<Plane> out(size_t(K), Plane(H, W));
  for (int k = 0; k < K; ++k)
    for (int p = 0; p < H * W; ++p) out[size_t(k)].values[size_t(p)] = float(res(p, k));
  return out;
}

/// Pooled responses of P field planes at the given patch centers.
/// Row g of the result holds out[g][r*P + p] = (field_p ⊛ mask_r)(grid[g]);
/// for odd supports this equals convolve2d(field_p, mask_r) sampled at the
/// grid (to float rounding). Patches reaching past the frame use mirror
/// border samples, again like convolve2d.
inline std::vector<float> pool_fields(const std::vector<Plane>& fields, const PoolPlan& plan,
                                      const std::vector<std::pair<int, int>>& grid) {
  const int P = int(fields.size());
  const int R = plan.regions();
  const int S = plan.support;
  const int taps = S * S;
  const int G = int(grid.size());
  std::vector<float> out(size_t(G) * size_t(R) * size_t(P));
  if (G == 0 || P == 0) return out;
  const int H = fields[0].height, W = fields[0].width;

  Eigen::MatrixXf patches(G, taps);
  for (int p = 0; p < P; ++p) {
    const Plane& f = fields[size_t(p)];
    for (int g = 0; g < G; ++g) {
      auto [x, y] = grid[size_t(g)];
      int y0 = y - plan.anchor, x0 = x - plan.anchor;
      if (y0 >= 0 && x0 >= 0 && y0 + S <= H && x0 + S <= W) {
        for (int j = 0; j < S; ++j) {
          const float* src = f.row(y0 + j) + x0;
          for (int i = 0; i < S; ++i) patches(g, j * S + i) = src[i];
        }
      } else {
        for (int j = 0; j < S; ++j)
          for (int i = 0; i < S; ++i)
            patches(g, j * S + i) = sample_border(f, y0 + j, x0 + i, Border::Mirror);
      }
    }
    Eigen::MatrixXf pooled = patches * plan.masks;  // G x R
    for (int g = 0; g < G; ++g)
      for (int r = 0; r < R; ++r) out[size_t(g) * size_t(R) * P + size_t(r) * P + p] = pooled(g, r);
  }
  return out;
}

}  // namespace vpr
