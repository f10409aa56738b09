#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "vpr/plane.hpp"

namespace vpr {

inline constexpr double kPi = std::numbers::pi;

/// Normalized 1-D Gaussian, taps at integer offsets [-radius, radius].
inline std::vector<float> gaussian_1d(double sigma, int radius) {
  std::vector<float> taps(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    double v = std::exp(-0.5 * i * i / (sigma * sigma));
    taps[i + radius] = float(v);
    sum += v;
  }
  for (auto& t : taps) t = float(t / sum);
  return taps;
}

/// Double-precision variant for temporal filters that are applied by
/// explicit double accumulation (never by the float convolution paths):
/// keeps the unit-sum property at full precision.
inline std::vector<double> gaussian_1d_double(double sigma, int radius) {
  std::vector<double> taps(2 * size_t(radius) + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    double v = std::exp(-0.5 * i * i / (sigma * sigma));
    taps[size_t(i + radius)] = v;
    sum += v;
  }
  for (auto& t : taps) t /= sum;
  return taps;
}

/// First-derivative-of-Gaussian taps; convolution with these approximates
/// d/dx (the sign accounts for the kernel flip in convolution).
inline std::vector<float> gaussian_deriv_1d(double sigma, int radius) {
  std::vector<float> g(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    double v = std::exp(-0.5 * i * i / (sigma * sigma));
    g[i + radius] = float(v);
    sum += v;
  }
  std::vector<float> taps(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i) taps[i + radius] = float(-i / (sigma * sigma) * g[i + radius] / sum);
  return taps;
}

inline std::vector<double> gaussian_deriv_1d_double(double sigma, int radius) {
  std::vector<double> g(2 * size_t(radius) + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    double v = std::exp(-0.5 * i * i / (sigma * sigma));
    g[size_t(i + radius)] = v;
    sum += v;
  }
  std::vector<double> taps(2 * size_t(radius) + 1);
  for (int i = -radius; i <= radius; ++i)
    taps[size_t(i + radius)] = -i / (sigma * sigma) * g[size_t(i + radius)] / sum;
  return taps;
}

/// Antisymmetric (sine-phase) 1-D Gabor: one full oscillation across the
/// support, Gaussian envelope, unit L2 norm. Sums to zero by symmetry.
inline std::vector<float> gabor_1d_odd(int radius, double wavelength, double sigma) {
  std::vector<float> taps(2 * radius + 1);
  double norm2 = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    double v = std::sin(2.0 * kPi * i / wavelength) * std::exp(-0.5 * i * i / (sigma * sigma));
    taps[i + radius] = float(v);
    norm2 += v * v;
  }
  double inv = norm2 > 0 ? 1.0 / std::sqrt(norm2) : 1.0;
  for (auto& t : taps) t = float(t * inv);
  return taps;
}

// ---------------------------------------------------------------------------
// 2-D odd Gabor bank
// ---------------------------------------------------------------------------

struct GaborBank2D {
  static constexpr int kOrientations = 8;
  static constexpr int kSize = 9;
  double sigma = 2.0;
  double wavelength = 9.0;      // one cycle across the support
  std::vector<Plane> kernels;   // 8 odd-symmetric 9x9 kernels, zero DC
};

/// Orientations at j*pi/8 (odd filters at theta and theta+pi are redundant
/// up to sign, so a half circle suffices). Zero DC enforced by mean
/// subtraction; each kernel scaled to unit L2. After the float cast the
/// residual DC (per-tap rounding, ~1e-8) is folded into the single
/// smallest-magnitude tap, where the reconversion error is ~1e-15, so the
/// stored coefficients sum to zero far inside the 1e-10 contract.
inline GaborBank2D build_gabor_bank_2d() {
  GaborBank2D bank;
  const int r = GaborBank2D::kSize / 2;
  const int taps = GaborBank2D::kSize * GaborBank2D::kSize;
  for (int j = 0; j < GaborBank2D::kOrientations; ++j) {
    double theta = j * kPi / 8.0;
    double cs = std::cos(theta), sn = std::sin(theta);
    std::vector<double> raw(static_cast<size_t>(taps));
    double sum = 0.0;
    for (int y = -r; y <= r; ++y)
      for (int x = -r; x <= r; ++x) {
        double v = std::exp(-0.5 * (x * x + y * y) / (bank.sigma * bank.sigma)) *
                   std::sin(2.0 * kPi * (x * cs + y * sn) / bank.wavelength);
        raw[size_t((y + r) * GaborBank2D::kSize + (x + r))] = v;
        sum += v;
      }
    double mean = sum / taps;
    double norm2 = 0.0;
    for (auto& v : raw) {
      v -= mean;
      norm2 += v * v;
    }
    double inv = norm2 > 0 ? 1.0 / std::sqrt(norm2) : 1.0;
    Plane k(GaborBank2D::kSize, GaborBank2D::kSize);
    for (size_t i = 0; i < raw.size(); ++i) k.values[i] = float(raw[i] * inv);
    double residual = 0.0;
    size_t smallest = 0;
    for (size_t i = 0; i < k.values.size(); ++i) {
      residual += k.values[i];
      if (std::fabs(k.values[i]) < std::fabs(k.values[smallest])) smallest = i;
    }
    k.values[smallest] = float(double(k.values[smallest]) - residual);
    bank.kernels.push_back(std::move(k));
  }
  return bank;
}

// ---------------------------------------------------------------------------
// Log-polar pooling geometry
// ---------------------------------------------------------------------------

/// 16 peripheral log-polar lobes (8 angles x 2 radii) plus one central
/// rotationally-symmetric lobe, sampled on the patch support. Coordinates
/// are normalized to [-1,1] across the patch; radii are fractions of the
/// half-width.
struct PoolingGeometry {
  static constexpr int kAngles = 8;
  static constexpr int kMaskCount = 17;
  double alpha = 4.0;
  double beta = 0.4;
  double d1 = 0.45;
  double d2 = 0.6;
  double d_center = 0.3;
  int support = 0;              // mask side length in pixels
  std::vector<Plane> masks;     // [ring d1: m=0..7][ring d2: m=0..7][central]

  static double angle(int m) { return m * kPi / 4.0; }
};

/// Peripheral lobe profile: exp(-alpha*[ln(r^2/d^2)]^2 - beta*|dtheta|),
/// maximal (=1) at r=d, theta=theta_m. dtheta wraps to [-pi,pi]. The r=0
/// singularity takes its limit value 0.
inline double pooling_peripheral_value(double x, double y, int m, double d, double alpha, double beta) {
  double r2 = x * x + y * y;
  if (r2 == 0.0) return 0.0;
  double lr = std::log(r2 / (d * d));
  double dtheta = std::atan2(y, x) - PoolingGeometry::angle(m);
  while (dtheta > kPi) dtheta -= 2.0 * kPi;
  while (dtheta < -kPi) dtheta += 2.0 * kPi;
  return std::exp(-alpha * lr * lr - beta * std::fabs(dtheta));
}

/// Central lobe: no angular term, log-radial decay from the patch centre
/// (value 1 at r=0), so the mask family covers the centre pixel.
inline double pooling_central_value(double x, double y, double d_center, double alpha) {
  double r2 = x * x + y * y;
  double lr = std::log1p(r2 / (d_center * d_center));
  return std::exp(-alpha * lr * lr);
}

inline PoolingGeometry build_pooling_masks(int support) {
  if (support < 5) throw std::invalid_argument("build_pooling_masks: support must be >= 5");
  PoolingGeometry geo;
  geo.support = support;
  const double c = (support - 1) / 2.0;
  auto sample = [&](auto&& value_fn) {
    Plane p(support, support);
    for (int gy = 0; gy < support; ++gy)
      for (int gx = 0; gx < support; ++gx) p.at(gy, gx) = float(value_fn((gx - c) / c, (gy - c) / c));
    return p;
  };
  for (double d : {geo.d1, geo.d2})
    for (int m = 0; m < PoolingGeometry::kAngles; ++m)
      geo.masks.push_back(sample([&](double x, double y) {
        return pooling_peripheral_value(x, y, m, d, geo.alpha, geo.beta);
      }));
  geo.masks.push_back(sample([&](double x, double y) {
    return pooling_central_value(x, y, geo.d_center, geo.alpha);
  }));
  return geo;
}

// ---------------------------------------------------------------------------
// Derivative / smoothing kernel set for the space-time descriptors
// ---------------------------------------------------------------------------

struct DerivativeKernels {
  Plane dog_x;                       // 5x5, antisymmetric along x
  Plane dog_y;                       // 5x5, antisymmetric along y
  std::vector<float> smooth_1d;       // 5-tap Gaussian used to build the masks
  std::vector<float> deriv_1d;        // 5-tap derivative-of-Gaussian
  std::vector<double> temporal_gauss; // 11 taps, sigma 2, sums to 1
  std::vector<double> temporal_dog;   // 11 taps, sigma 2, antisymmetric
  std::vector<float> gabor_space;    // 5 taps, one cycle
  std::vector<float> gabor_time;     // 9 taps, one cycle
};

inline DerivativeKernels gaussian_kernels() {
  DerivativeKernels k;
  const double spatial_sigma = 1.0;
  k.smooth_1d = gaussian_1d(spatial_sigma, 2);
  k.deriv_1d = gaussian_deriv_1d(spatial_sigma, 2);
  k.dog_x = Plane(5, 5);
  k.dog_y = Plane(5, 5);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) {
      k.dog_x.at(y, x) = k.deriv_1d[x] * k.smooth_1d[y];
      k.dog_y.at(y, x) = k.smooth_1d[x] * k.deriv_1d[y];
    }
  k.temporal_gauss = gaussian_1d_double(2.0, 5);
  k.temporal_dog = gaussian_deriv_1d_double(2.0, 5);
  k.gabor_space = gabor_1d_odd(2, 5.0, 1.25);
  k.gabor_time = gabor_1d_odd(4, 9.0, 2.25);
  return k;
}

}  // namespace vpr
