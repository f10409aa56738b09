#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "vpr/convolve.hpp"
#include "vpr/descriptor.hpp"
#include "vpr/journey.hpp"
#include "vpr/kernels.hpp"

namespace vpr {

namespace detail {

// Fixed dense-SIFT geometry: 11x11 patch (4x4 cells of 2.75 px), 8
// orientation bins, Gaussian spatial weighting over the patch.
struct DsiftLayout {
  static constexpr int kRadius = 5;
  static constexpr int kSide = 2 * kRadius + 1;
  static constexpr double kCellPx = 2.75;
  static constexpr double kSigmaWeight = 5.5;
  static constexpr float kClip = 0.2f;

  struct Vote {
    int cell;      // 0..15
    float weight;  // bilinear cell weight x Gaussian window
  };
  // Per patch offset (row-major over the 11x11 support): up to 4 cell votes.
  std::array<std::vector<Vote>, size_t(kSide) * kSide> votes;
};

inline const DsiftLayout& dsift_layout() {
  static const DsiftLayout layout = [] {
    DsiftLayout l;
    for (int dy = -DsiftLayout::kRadius; dy <= DsiftLayout::kRadius; ++dy)
      for (int dx = -DsiftLayout::kRadius; dx <= DsiftLayout::kRadius; ++dx) {
        size_t idx = size_t(dy + DsiftLayout::kRadius) * DsiftLayout::kSide +
                     size_t(dx + DsiftLayout::kRadius);
        double g = std::exp(-0.5 * (dx * dx + dy * dy) /
                            (DsiftLayout::kSigmaWeight * DsiftLayout::kSigmaWeight));
        // Continuous cell coordinates: offsets -5..5 span cells 0..3.
        double cx = (dx + 5.5) / DsiftLayout::kCellPx - 0.5;
        double cy = (dy + 5.5) / DsiftLayout::kCellPx - 0.5;
        int cx0 = int(std::floor(cx)), cy0 = int(std::floor(cy));
        double fx = cx - cx0, fy = cy - cy0;
        const double wx[2] = {1.0 - fx, fx};
        const double wy[2] = {1.0 - fy, fy};
        for (int by = 0; by < 2; ++by)
          for (int bx = 0; bx < 2; ++bx) {
            int cellx = cx0 + bx, celly = cy0 + by;
            if (cellx < 0 || cellx > 3 || celly < 0 || celly > 3) continue;
            double w = wx[bx] * wy[by] * g;
            if (w <= 0.0) continue;
            l.votes[idx].push_back({celly * 4 + cellx, float(w)});
          }
      }
    return l;
  }();
  return layout;
}

}  // namespace detail

/// Dense SIFT over the shared stride-3 grid: gradients of the sigma=1
/// scale-space image, 4x4 spatial cells x 8 orientation bins, soft-binned
/// in space and orientation, clip-and-renormalize per descriptor.
inline DescriptorSet dsift_plane(const Plane& gray, int frame_index, bool normalize = true) {
  const auto& layout = detail::dsift_layout();
  static const std::vector<float> smooth = gaussian_1d(1.0, 3);
  static const std::vector<float> diff = {0.5f, 0.f, -0.5f};

  Plane s = convolve_sep(gray, smooth, smooth);
  Plane gx = convolve_rows(s, diff);
  Plane gy = convolve_cols(s, diff);

  // Per-pixel magnitude and soft orientation-bin assignment.
  const size_t n = s.size();
  std::vector<float> mag(n), ofrac(n);
  std::vector<uint8_t> obin(n);
  for (size_t i = 0; i < n; ++i) {
    float dx = gx.values[i], dy = gy.values[i];
    mag[i] = std::sqrt(dx * dx + dy * dy);
    double theta = std::atan2(double(dy), double(dx));  // [-pi, pi]
    double o = (theta + kPi) / (kPi / 4.0);             // [0, 8]
    int o0 = int(o);
    if (o0 >= 8) o0 = 7;
    obin[i] = uint8_t(o0);
    ofrac[i] = float(o - o0);
  }

  DescriptorSet set;
  set.method = Method::SIFT;
  set.frame_index = frame_index;
  set.support = detail::DsiftLayout::kSide;
  set.dim = 128;
  set.grid = dense_grid(gray.height, gray.width);
  set.data.assign(set.grid.size() * 128, 0.f);

  for (size_t g = 0; g < set.grid.size(); ++g) {
    auto [x, y] = set.grid[g];
    float* d = set.vec(g);
    size_t t = 0;
    for (int dy = -detail::DsiftLayout::kRadius; dy <= detail::DsiftLayout::kRadius; ++dy) {
      size_t base = size_t(y + dy) * size_t(gray.width) + size_t(x - detail::DsiftLayout::kRadius);
      for (int dx = 0; dx < detail::DsiftLayout::kSide; ++dx, ++t) {
        size_t p = base + size_t(dx);
        float m = mag[p];
        if (m == 0.f) continue;
        int b0 = obin[p];
        int b1 = (b0 + 1) & 7;
        float f = ofrac[p];
        float m0 = m * (1.f - f), m1 = m * f;
        for (const auto& v : layout.votes[t]) {
          d[v.cell * 8 + b0] += m0 * v.weight;
          d[v.cell * 8 + b1] += m1 * v.weight;
        }
      }
    }
    if (normalize) {
      double norm2 = 0.0;
      for (int k = 0; k < 128; ++k) norm2 += double(d[k]) * d[k];
      if (norm2 >= 1e-24) {
        float inv = float(1.0 / std::sqrt(norm2));
        double clipped2 = 0.0;
        for (int k = 0; k < 128; ++k) {
          d[k] = std::min(d[k] * inv, detail::DsiftLayout::kClip);
          clipped2 += double(d[k]) * d[k];
        }
        if (clipped2 >= 1e-24) {
          float inv2 = float(1.0 / std::sqrt(clipped2));
          for (int k = 0; k < 128; ++k) d[k] *= inv2;
        }
      }
    }
  }
  return set;
}

inline DescriptorSet dsift_frame(const Frame& frame, bool normalize = true) {
  return dsift_plane(frame.grayscale(), frame.index, normalize);
}

}  // namespace vpr
