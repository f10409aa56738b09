#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace vpr {

/// Single-channel raster of float intensities, row-major.
struct Plane {
  int height = 0;
  int width = 0;
  std::vector<float> values;

  Plane() = default;
  Plane(int h, int w, float fill = 0.f) : height(h), width(w), values(size_t(h) * size_t(w), fill) {}

  float& at(int y, int x) { return values[size_t(y) * width + x]; }
  float at(int y, int x) const { return values[size_t(y) * width + x]; }
  const float* row(int y) const { return values.data() + size_t(y) * width; }
  float* row(int y) { return values.data() + size_t(y) * width; }
  size_t size() const { return values.size(); }

  bool same_shape(const Plane& o) const { return height == o.height && width == o.width; }

  bool all_finite() const {
    for (float v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

/// Reflect an out-of-range coordinate back into [0, n) (symmetric padding,
/// edge pixel not repeated: -1 -> 1, n -> n-2).
inline int mirror_index(int i, int n) {
  if (n == 1) return 0;
  int period = 2 * (n - 1);
  i = i % period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

/// Value at (y,x) under the given border rule.
enum class Border { Mirror, Zero };

inline float sample_border(const Plane& p, int y, int x, Border mode) {
  if (y >= 0 && y < p.height && x >= 0 && x < p.width) return p.at(y, x);
  if (mode == Border::Zero) return 0.f;
  return p.at(mirror_index(y, p.height), mirror_index(x, p.width));
}

inline Plane abs_plane(const Plane& p) {
  Plane out(p.height, p.width);
  for (size_t i = 0; i < p.size(); ++i) out.values[i] = std::fabs(p.values[i]);
  return out;
}

}  // namespace vpr
