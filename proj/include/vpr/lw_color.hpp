#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "vpr/convolve.hpp"
#include "vpr/descriptor.hpp"
#include "vpr/kernels.hpp"
#include "vpr/st_gauss.hpp"
#include "vpr/temporal.hpp"

namespace vpr {

/// 4x4 uniform region index of pixel (y,x) in an HxW frame.
inline int lw_region_of(int y, int x, int height, int width) {
  return (y * 4 / height) * 4 + (x * 4 / width);
}

/// Per-frame, per-channel region sums feeding the frame-level color
/// space-time descriptor. Region averaging commutes with the temporal
/// filters, so only these 16-value sums have to survive per frame.
struct LwFrameSums {
  int height = 0, width = 0;
  // [channel][region]: sums of d/dx, d/dy (derivative-of-Gaussian), raw value.
  std::array<std::array<double, 16>, 3> gx{}, gy{}, raw{};
};

inline LwFrameSums lw_frame_sums(const Frame& frame) {
  const auto& k = detail::derivative_kernels();
  LwFrameSums s;
  s.height = frame.height;
  s.width = frame.width;
  for (int c = 0; c < 3; ++c) {
    Plane dx = convolve2d(frame.planes[size_t(c)], k.dog_x);
    Plane dy = convolve2d(frame.planes[size_t(c)], k.dog_y);
    for (int y = 0; y < frame.height; ++y)
      for (int x = 0; x < frame.width; ++x) {
        int r = lw_region_of(y, x, frame.height, frame.width);
        s.gx[size_t(c)][size_t(r)] += dx.at(y, x);
        s.gy[size_t(c)][size_t(r)] += dy.at(y, x);
        s.raw[size_t(c)][size_t(r)] += frame.planes[size_t(c)].at(y, x);
      }
  }
  return s;
}

/// Combine 11 frames' region sums (window order) into the 144-dim
/// descriptor: x/y gradients smoothed by the 11-point temporal Gaussian,
/// t gradient from the temporal derivative-of-Gaussian on raw intensities,
/// each of the 9 channelxaxis components averaged over 16 regions.
/// Layout: d[(channel*3 + axis)*16 + region], axes x,y,t.
inline std::array<double, 144> lw_color_from_sums(const std::vector<const LwFrameSums*>& window) {
  const auto& k = detail::derivative_kernels();
  const size_t len = k.temporal_gauss.size();
  if (window.size() != len)
    throw std::invalid_argument("lw_color_from_sums: window must have 11 frames");
  const int H = window[0]->height, W = window[0]->width;

  std::array<double, 16> count{};
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) count[size_t(lw_region_of(y, x, H, W))] += 1.0;

  std::array<double, 144> d{};
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 16; ++r) {
      double sx = 0.0, sy = 0.0, st = 0.0;
      for (size_t t = 0; t < len; ++t) {
        sx += double(k.temporal_gauss[t]) * window[t]->gx[size_t(c)][size_t(r)];
        sy += double(k.temporal_gauss[t]) * window[t]->gy[size_t(c)][size_t(r)];
        st += double(k.temporal_dog[t]) * window[t]->raw[size_t(c)][size_t(r)];
      }
      d[size_t((c * 3 + 0) * 16 + r)] = sx / count[size_t(r)];
      d[size_t((c * 3 + 1) * 16 + r)] = sy / count[size_t(r)];
      d[size_t((c * 3 + 2) * 16 + r)] = st / count[size_t(r)];
    }
  return d;
}

/// Frame-level color space-time descriptor of an 11-frame window: a single
/// 144-dim vector attached to the central frame (nominal one-point grid).
inline DescriptorSet lw_color_window(const TemporalWindow& window) {
  if (window.length != 11) throw std::invalid_argument("lw_color_window: window length must be 11");
  std::vector<LwFrameSums> sums;
  sums.reserve(window.frames.size());
  for (const Frame* f : window.frames) {
    if (f->planes[0].size() == 0 || f->planes[1].size() == 0 || f->planes[2].size() == 0)
      throw DataError("lw_color_window: frame missing RGB planes");
    sums.push_back(lw_frame_sums(*f));
  }
  std::vector<const LwFrameSums*> ptrs;
  for (const auto& s : sums) ptrs.push_back(&s);
  std::array<double, 144> d = lw_color_from_sums(ptrs);

  DescriptorSet set;
  set.method = Method::LW_COLOR;
  set.frame_index = window.center;
  set.support = 0;
  set.dim = 144;
  const Frame& cf = window.center_frame();
  set.grid = {{cf.width / 2, cf.height / 2}};
  set.data.resize(144);
  for (size_t i = 0; i < d.size(); ++i) set.data[i] = float(d[i]);
  return set;
}

}  // namespace vpr
