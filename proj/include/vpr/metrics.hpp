#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "vpr/errors.hpp"

namespace vpr {

enum class DistanceMetric { Chi2, Hellinger };

inline const char* metric_name(DistanceMetric m) {
  return m == DistanceMetric::Chi2 ? "chi2" : "hellinger";
}

inline DistanceMetric metric_from_name(const std::string& name) {
  if (name == "chi2") return DistanceMetric::Chi2;
  if (name == "hellinger") return DistanceMetric::Hellinger;
  throw DataError("unknown metric: " + name);
}

namespace detail {

constexpr double kChi2Eps = 1e-12;

/// Signed square root, the elementwise map used by the Hellinger kernel.
inline double signed_sqrt(double v) { return v < 0.0 ? -std::sqrt(-v) : std::sqrt(v); }

/// Chi-squared kernel over raw arrays; the score-matrix path calls this
/// same function so matrix entries equal direct metric calls bitwise.
inline double chi2_kernel(const double* a, const double* b, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double diff = a[i] - b[i];
    acc += diff * diff / (a[i] + b[i] + kChi2Eps);
  }
  return 0.5 * acc;
}

/// Hellinger kernel over pre-mapped (signed-sqrt) arrays.
inline double hellinger_kernel(const double* sa, const double* sb, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double diff = sa[i] - sb[i];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

}  // namespace detail

/// Symmetric chi-squared distance between non-negative histograms:
/// 0.5 * sum (a-b)^2 / (a+b+1e-12). Rejects negative entries.
inline double chi2_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DataError("chi2_distance: length mismatch");
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] < 0.0 || b[i] < 0.0) throw DataError("chi2_distance: negative entry");
  return detail::chi2_kernel(a.data(), b.data(), a.size());
}

/// Hellinger distance: L2 distance after an elementwise signed square
/// root. The signed map extends the metric to codes with negative
/// components (e.g. VLAD); for non-negative histograms it is the usual
/// Hellinger distance (without a 1/sqrt(2) factor).
inline double hellinger_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DataError("hellinger_distance: length mismatch");
  std::vector<double> sa(a.size()), sb(b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    sa[i] = detail::signed_sqrt(a[i]);
    sb[i] = detail::signed_sqrt(b[i]);
  }
  return detail::hellinger_kernel(sa.data(), sb.data(), a.size());
}

inline double code_distance(DistanceMetric m, const std::vector<double>& a,
                            const std::vector<double>& b) {
  return m == DistanceMetric::Chi2 ? chi2_distance(a, b) : hellinger_distance(a, b);
}

}  // namespace vpr
