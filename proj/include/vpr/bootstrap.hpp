#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "vpr/errors.hpp"
#include "vpr/rng.hpp"

namespace vpr {

constexpr int kCdfGridPoints = 512;

/// Bootstrap summary of absolute localization errors: the original
/// sample's moments plus a resample-averaged CDF on a uniform grid.
struct ErrorDistribution {
  std::vector<double> samples;  // original |error| values (cm)
  double range_cm = 0.0;
  std::vector<double> grid;     // uniform evaluation points spanning [0, range_cm]
  std::vector<double> cdf;      // average of per-resample empirical CDFs
  double mu = 0.0;              // mean of the original sample
  double sigma = 0.0;           // stddev of the original sample (n-1)
  double boot_mu = 0.0;         // mean of resample means
  double boot_sigma = 0.0;      // stddev of resample means
  int trials = 0;
  uint64_t seed = 0;
};

/// Resample |errors| with replacement `trials` times (resample size =
/// sample size) and average the per-resample empirical CDFs on a uniform
/// grid (512 points by default) over [0, range_cm]. Deterministic in
/// (sample multiset, range, trials, seed); the resample draws do not
/// depend on grid_points, so refining the grid only refines the curve.
inline ErrorDistribution bootstrap_error_cdf(const std::vector<double>& errors, double range_cm,
                                             int trials, uint64_t seed,
                                             int grid_points = kCdfGridPoints) {
  if (errors.empty()) throw DataError("bootstrap_error_cdf: empty error sample");
  if (range_cm <= 0.0) throw DataError("bootstrap_error_cdf: non-positive range");
  if (trials < 1) throw DataError("bootstrap_error_cdf: trials must be >= 1");
  if (grid_points < 2) throw DataError("bootstrap_error_cdf: grid needs >= 2 points");

  ErrorDistribution dist;
  dist.samples = errors;
  dist.range_cm = range_cm;
  dist.trials = trials;
  dist.seed = seed;

  const size_t n = errors.size();
  std::vector<double> sorted(errors);
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0.0)
    throw DataError("bootstrap_error_cdf: negative error sample");
  if (sorted.back() > range_cm)
    throw DataError("bootstrap_error_cdf: sample exceeds range");

  double sum = 0.0;
  for (double v : sorted) sum += v;
  dist.mu = sum / double(n);
  if (n > 1) {
    double acc = 0.0;
    for (double v : sorted) {
      double d = v - dist.mu;
      acc += d * d;
    }
    dist.sigma = std::sqrt(acc / double(n - 1));
  }

  dist.grid.resize(size_t(grid_points));
  for (int g = 0; g < grid_points; ++g)
    dist.grid[size_t(g)] = range_cm * double(g) / double(grid_points - 1);

  std::vector<double> cdf_sum(size_t(grid_points), 0.0);
  std::vector<double> resample(n);
  Rng rng(seed);
  double mean_acc = 0.0, mean_sq_acc = 0.0;
  for (int t = 0; t < trials; ++t) {
    double rsum = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double v = sorted[rng.uniform_index(n)];
      resample[i] = v;
      rsum += v;
    }
    double rmean = rsum / double(n);
    mean_acc += rmean;
    mean_sq_acc += rmean * rmean;
    std::sort(resample.begin(), resample.end());
    size_t i = 0;
    for (int g = 0; g < grid_points; ++g) {
      while (i < n && resample[i] <= dist.grid[size_t(g)]) ++i;
      cdf_sum[size_t(g)] += double(i) / double(n);
    }
  }
  dist.cdf.resize(size_t(grid_points));
  for (int g = 0; g < grid_points; ++g) dist.cdf[size_t(g)] = cdf_sum[size_t(g)] / double(trials);

  dist.boot_mu = mean_acc / double(trials);
  double var = mean_sq_acc / double(trials) - dist.boot_mu * dist.boot_mu;
  dist.boot_sigma = var > 0.0 ? std::sqrt(var) : 0.0;
  return dist;
}

/// Trapezoidal integral of the CDF over [0, range_cm], normalized by the
/// range. 1.0 means perfect localization; uniform errors give 0.5.
inline double compute_auc(const ErrorDistribution& dist, double range_cm) {
  if (range_cm <= 0.0) throw DataError("compute_auc: non-positive range");
  if (dist.grid.size() < 2 || dist.cdf.size() != dist.grid.size())
    throw DataError("compute_auc: distribution lacks a CDF grid");
  double area = 0.0;
  for (size_t g = 1; g < dist.grid.size(); ++g)
    area += 0.5 * (dist.cdf[g] + dist.cdf[g - 1]) * (dist.grid[g] - dist.grid[g - 1]);
  return area / range_cm;
}

inline double compute_auc(const ErrorDistribution& dist) { return compute_auc(dist, dist.range_cm); }

}  // namespace vpr
