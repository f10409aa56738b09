#pragma once

#include <span>
#include <stdexcept>

#include "vpr/plane.hpp"

namespace vpr {

/// Full 2-D convolution (kernel flipped), same-size output. Odd kernel
/// dimensions keep the result centered; even ones bias by half a pixel and
/// are rejected.
inline Plane convolve2d(const Plane& plane, const Plane& kernel, Border mode = Border::Mirror) {
  if (kernel.height > plane.height || kernel.width > plane.width)
    throw std::invalid_argument("convolve2d: kernel larger than plane");
  if (kernel.height % 2 == 0 || kernel.width % 2 == 0)
    throw std::invalid_argument("convolve2d: kernel dimensions must be odd");
  const int ry = kernel.height / 2, rx = kernel.width / 2;
  Plane out(plane.height, plane.width);
  for (int y = 0; y < plane.height; ++y) {
    bool y_interior = (y - ry >= 0) && (y + ry < plane.height);
    for (int x = 0; x < plane.width; ++x) {
      bool interior = y_interior && (x - rx >= 0) && (x + rx < plane.width);
      double acc = 0.0;
      if (interior) {
        for (int ky = -ry; ky <= ry; ++ky) {
          const float* src = plane.row(y - ky) + (x + rx);
          const float* k = kernel.row(ky + ry);
          for (int kx = 0; kx < kernel.width; ++kx) acc += double(src[-kx]) * k[kx];
        }
      } else {
        for (int ky = -ry; ky <= ry; ++ky)
          for (int kx = -rx; kx <= rx; ++kx)
            acc += double(sample_border(plane, y - ky, x - kx, mode)) * kernel.at(ky + ry, kx + rx);
      }
      out.at(y, x) = float(acc);
    }
  }
  return out;
}

/// 1-D convolution along rows (x axis). Taps must have odd length.
inline Plane convolve_rows(const Plane& plane, std::span<const float> taps, Border mode = Border::Mirror) {
  if (taps.size() % 2 == 0) throw std::invalid_argument("convolve_rows: even tap count");
  const int r = int(taps.size()) / 2;
  Plane out(plane.height, plane.width);
  for (int y = 0; y < plane.height; ++y) {
    for (int x = 0; x < plane.width; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) acc += double(sample_border(plane, y, x - k, mode)) * taps[k + r];
      out.at(y, x) = float(acc);
    }
  }
  return out;
}

/// 1-D convolution along columns (y axis).
inline Plane convolve_cols(const Plane& plane, std::span<const float> taps, Border mode = Border::Mirror) {
  if (taps.size() % 2 == 0) throw std::invalid_argument("convolve_cols: even tap count");
  const int r = int(taps.size()) / 2;
  Plane out(plane.height, plane.width);
  for (int y = 0; y < plane.height; ++y) {
    for (int x = 0; x < plane.width; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) acc += double(sample_border(plane, y - k, x, mode)) * taps[k + r];
      out.at(y, x) = float(acc);
    }
  }
  return out;
}

/// Separable convolution: rows with `hx`, then columns with `hy`.
inline Plane convolve_sep(const Plane& plane, std::span<const float> hx, std::span<const float> hy,
                          Border mode = Border::Mirror) {
  return convolve_cols(convolve_rows(plane, hx, mode), hy, mode);
}

}  // namespace vpr
