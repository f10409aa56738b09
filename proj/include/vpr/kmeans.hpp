#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "vpr/descriptor.hpp"
#include "vpr/errors.hpp"
#include "vpr/parallel.hpp"
#include "vpr/rng.hpp"

namespace vpr {

/// Sampled descriptor vectors with per-row provenance, so dictionary
/// exclusion stays auditable after training.
struct TrainingSet {
  int dim = 0;
  std::vector<float> data;                // count x dim, row-major
  std::vector<uint32_t> provenance;       // row -> index into journey_ids
  std::vector<std::string> journey_ids;

  size_t count() const { return provenance.size(); }
  const float* row(size_t i) const { return data.data() + i * size_t(dim); }
};

namespace detail {

struct DumpStats {
  size_t vectors = 0;
  int dim = 0;
};

/// Header-only walk of a descriptor dump (seeks over the payload).
inline DumpStats dump_stats(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open descriptor dump: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (in.gcount() != sizeof(magic) || std::memcmp(magic, kDescMagic, sizeof(magic)) != 0)
    throw DataError("bad descriptor dump magic: " + path);
  DumpStats s;
  DescRecordHeader h;
  while (in.read(reinterpret_cast<char*>(&h), sizeof(h))) {
    if (s.dim == 0) s.dim = int(h.dim);
    else if (s.dim != int(h.dim)) throw DataError("mixed dimensions in dump: " + path);
    s.vectors += h.count;
    in.seekg(std::streamoff(size_t(h.count) * h.dim * sizeof(float)), std::ios::cur);
  }
  return s;
}

}  // namespace detail

/// Uniform sample (without replacement, selection sampling) of up to `cap`
/// descriptors across the given journey dumps, in dump order. Deterministic
/// in (dump order, seed). Provenance rows record the source journey.
inline TrainingSet build_training_set(const std::vector<std::pair<std::string, std::string>>& journey_dumps,
                                      size_t cap, uint64_t seed) {
  TrainingSet set;
  size_t total = 0;
  for (const auto& [journey_id, path] : journey_dumps) {
    auto s = detail::dump_stats(path);
    if (s.vectors == 0) continue;
    if (set.dim == 0) set.dim = s.dim;
    else if (set.dim != s.dim) throw DataError("training dumps disagree on dimension");
    total += s.vectors;
  }
  if (total == 0) throw DataError("no descriptors available for training");
  size_t target = std::min(cap, total);
  set.data.reserve(target * size_t(set.dim));
  set.provenance.reserve(target);

  Rng rng = Rng::substream(seed, 0x7261696e);  // training-sample stream
  size_t remaining = total, needed = target;
  for (const auto& [journey_id, path] : journey_dumps) {
    uint32_t jidx = uint32_t(set.journey_ids.size());
    set.journey_ids.push_back(journey_id);
    DescriptorDumpReader reader(path);
    DescriptorSet rec;
    while (reader.next(rec)) {
      for (size_t i = 0; i < rec.count(); ++i) {
        if (needed > 0 && rng.uniform() * double(remaining) < double(needed)) {
          const float* v = rec.vec(i);
          set.data.insert(set.data.end(), v, v + set.dim);
          set.provenance.push_back(jidx);
          --needed;
        }
        --remaining;
      }
    }
  }
  return set;
}

/// k-means dictionary: centers plus the metadata that makes a trained
/// codebook reproducible and auditable.
struct Codebook {
  Method method = Method::SIFT;
  int K = 0;
  int dim = 0;
  uint64_t seed = 0;
  std::string excluded_journey_id;
  std::vector<float> centers;          // K x dim, row-major
  std::vector<double> distortion_log;  // per assignment phase

  const float* center(int k) const { return centers.data() + size_t(k) * size_t(dim); }

  void validate() const {
    if (K <= 0 || dim <= 0 || centers.size() != size_t(K) * size_t(dim))
      throw DataError("codebook shape mismatch");
    for (float v : centers)
      if (!std::isfinite(v)) throw DataError("non-finite codebook center");
  }
};

/// Exact nearest-center search. A float matrix product screens candidates;
/// every center within a safety margin of the screened best is re-measured
/// in double, so the reported index (ties -> lowest) and squared distance
/// equal a brute-force double scan.
class NearestCenterIndex {
public:
  NearestCenterIndex(const float* centers, int K, int dim) : K_(K), dim_(dim), centers_(centers) {
    cmat_.resize(dim, K);
    norm2_.resize(size_t(K));
    for (int k = 0; k < K; ++k) {
      double n2 = 0.0;
      for (int j = 0; j < dim; ++j) {
        float v = centers[size_t(k) * dim + j];
        cmat_(j, k) = v;
        n2 += double(v) * v;
      }
      norm2_[size_t(k)] = float(n2);
    }
  }

  explicit NearestCenterIndex(const Codebook& cb)
      : NearestCenterIndex(cb.centers.data(), cb.K, cb.dim) {}

  int clusters() const { return K_; }
  int dim() const { return dim_; }

  /// Assign n points (row-major, n x dim). out_index gets the nearest
  /// center per point; out_d2 (optional) the exact squared distance.
  void assign(const float* points, size_t n, int* out_index, double* out_d2, int jobs = 1) const {
    constexpr size_t kBlock = 2048;
    parallel_chunks(n, kBlock, jobs, [&](size_t b, size_t e) {
      Eigen::Map<const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> P(
          points + b * size_t(dim_), Eigen::Index(e - b), dim_);
      Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> S = P * cmat_;
      for (size_t i = b; i < e; ++i) {
        const float* srow = S.data() + (i - b) * size_t(K_);
        float best = std::numeric_limits<float>::infinity();
        for (int k = 0; k < K_; ++k) {
          float score = norm2_[size_t(k)] - 2.f * srow[k];
          if (score < best) best = score;
        }
        float margin = 1e-3f * std::max(1.f, std::fabs(best));
        const float* x = points + i * size_t(dim_);
        double best_d2 = std::numeric_limits<double>::infinity();
        int best_k = -1;
        for (int k = 0; k < K_; ++k) {
          if (norm2_[size_t(k)] - 2.f * srow[k] > best + margin) continue;
          const float* c = centers_ + size_t(k) * size_t(dim_);
          double d2 = 0.0;
          for (int j = 0; j < dim_; ++j) {
            double diff = double(x[j]) - double(c[j]);
            d2 += diff * diff;
          }
          if (d2 < best_d2) {
            best_d2 = d2;
            best_k = k;
          }
        }
        out_index[i] = best_k;
        if (out_d2) out_d2[i] = best_d2;
      }
    });
  }

private:
  int K_ = 0, dim_ = 0;
  const float* centers_;  // borrowed; keep the source alive
  Eigen::MatrixXf cmat_;  // dim x K
  std::vector<float> norm2_;
};

inline std::vector<int> assign_to_centers(const float* points, size_t n, const Codebook& cb,
                                          int jobs = 1) {
  NearestCenterIndex index(cb);
  std::vector<int> out(n);
  index.assign(points, n, out.data(), nullptr, jobs);
  return out;
}

namespace detail {

// k-means++ over a bounded seeding pool (the full set when small). The
// pool keeps sequential center draws cheap at K in the thousands; Lloyd
// then runs over the full training set.
inline std::vector<float> kmeanspp_seed(const TrainingSet& train, int K, Rng& rng) {
  const int D = train.dim;
  const size_t n = train.count();
  constexpr size_t kPoolCap = 20000;
  std::vector<size_t> pool;
  if (n <= kPoolCap) {
    pool.resize(n);
    for (size_t i = 0; i < n; ++i) pool[i] = i;
  } else {
    pool.reserve(kPoolCap);
    size_t remaining = n, needed = kPoolCap;
    for (size_t i = 0; i < n; ++i) {
      if (needed > 0 && rng.uniform() * double(remaining) < double(needed)) {
        pool.push_back(i);
        --needed;
      }
      --remaining;
    }
  }
  const size_t m = pool.size();
  if (m < size_t(K)) {
    // Pool cap below K cannot happen (cap >> default K), but stay safe.
    pool.resize(n);
    for (size_t i = 0; i < n; ++i) pool[i] = i;
  }

  Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> X(Eigen::Index(pool.size()), D);
  for (size_t i = 0; i < pool.size(); ++i)
    std::memcpy(X.row(Eigen::Index(i)).data(), train.row(pool[i]), size_t(D) * sizeof(float));
  Eigen::VectorXf xn2 = X.rowwise().squaredNorm();

  std::vector<float> centers(size_t(K) * size_t(D));
  auto set_center = [&](int k, size_t pool_idx) {
    std::memcpy(centers.data() + size_t(k) * D, X.row(Eigen::Index(pool_idx)).data(),
                size_t(D) * sizeof(float));
  };

  size_t first = size_t(rng.uniform_index(pool.size()));
  set_center(0, first);

  Eigen::VectorXf d2 = (xn2.array() - 2.f * (X * X.row(Eigen::Index(first)).transpose()).array() +
                        xn2(Eigen::Index(first)))
                           .max(0.f)
                           .matrix();
  for (int k = 1; k < K; ++k) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < d2.size(); ++i) total += double(d2(i));
    size_t chosen;
    if (total <= 0.0) {
      chosen = size_t(rng.uniform_index(pool.size()));
    } else {
      double target = rng.uniform() * total;
      double cum = 0.0;
      Eigen::Index i = 0;
      for (; i < d2.size(); ++i) {
        cum += double(d2(i));
        if (cum > target) break;
      }
      if (i >= d2.size()) i = d2.size() - 1;
      chosen = size_t(i);
    }
    set_center(k, chosen);
    Eigen::VectorXf nd2 = (xn2.array() - 2.f * (X * X.row(Eigen::Index(chosen)).transpose()).array() +
                           xn2(Eigen::Index(chosen)))
                              .max(0.f)
                              .matrix();
    d2 = d2.cwiseMin(nd2);
  }
  return centers;
}

}  // namespace detail

/// Lloyd's k-means with k-means++ seeding. Deterministic in (input order,
/// seed) and independent of `jobs`. Stops at an assignment fixpoint or
/// after max_iters assignment phases; empty clusters re-seed at the
/// farthest point from its center.
inline Codebook train_codebook(const TrainingSet& train, Method method, int K, uint64_t seed,
                               const std::string& excluded_journey_id = "", int jobs = 1,
                               int max_iters = 100) {
  const size_t n = train.count();
  const int D = train.dim;
  if (K <= 0) throw DataError("train_codebook: K must be positive");
  if (n < size_t(K))
    throw DataError("train_codebook: " + std::to_string(n) + " vectors < K=" + std::to_string(K));

  Codebook cb;
  cb.method = method;
  cb.K = K;
  cb.dim = D;
  cb.seed = seed;
  cb.excluded_journey_id = excluded_journey_id;

  Rng rng(seed);
  cb.centers = detail::kmeanspp_seed(train, K, rng);

  std::vector<int> assign(n), prev_assign;
  std::vector<double> d2(n);
  std::vector<double> sums(size_t(K) * size_t(D));
  std::vector<size_t> counts(static_cast<size_t>(K));

  for (int iter = 0; iter < max_iters; ++iter) {
    NearestCenterIndex index(cb.centers.data(), K, D);
    index.assign(train.data.data(), n, assign.data(), d2.data(), jobs);

    double distortion = 0.0;
    for (size_t i = 0; i < n; ++i) distortion += d2[i];
    cb.distortion_log.push_back(distortion);

    if (!prev_assign.empty() && prev_assign == assign) break;
    prev_assign = assign;

    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (size_t i = 0; i < n; ++i) {
      double* acc = sums.data() + size_t(assign[i]) * D;
      const float* x = train.row(i);
      for (int j = 0; j < D; ++j) acc[j] += x[j];
      ++counts[size_t(assign[i])];
    }
    std::vector<char> reseeded(n, 0);
    for (int k = 0; k < K; ++k) {
      float* c = cb.centers.data() + size_t(k) * D;
      if (counts[size_t(k)] > 0) {
        const double* acc = sums.data() + size_t(k) * D;
        double inv = 1.0 / double(counts[size_t(k)]);
        for (int j = 0; j < D; ++j) c[j] = float(acc[j] * inv);
      } else {
        // Farthest point not already consumed by an earlier empty cluster.
        size_t far = 0;
        double far_d2 = -1.0;
        for (size_t i = 0; i < n; ++i)
          if (!reseeded[i] && d2[i] > far_d2) {
            far_d2 = d2[i];
            far = i;
          }
        reseeded[far] = 1;
        const float* x = train.row(far);
        for (int j = 0; j < D; ++j) c[j] = x[j];
      }
    }
  }
  cb.validate();
  return cb;
}

// ---- Codebook file: magic, {method tag, K, D, seed, excluded id}, centers.

constexpr char kCodebookMagic[8] = {'V', 'P', 'C', 'O', 'D', 'E', '0', '1'};

inline void write_codebook(const std::string& path, const Codebook& cb) {
  cb.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write codebook: " + path);
  out.write(kCodebookMagic, sizeof(kCodebookMagic));
  uint32_t tag = method_tag(cb.method), K = uint32_t(cb.K), D = uint32_t(cb.dim);
  uint64_t seed = cb.seed;
  uint32_t name_len = uint32_t(cb.excluded_journey_id.size());
  out.write(reinterpret_cast<const char*>(&tag), sizeof(tag));
  out.write(reinterpret_cast<const char*>(&K), sizeof(K));
  out.write(reinterpret_cast<const char*>(&D), sizeof(D));
  out.write(reinterpret_cast<const char*>(&seed), sizeof(seed));
  out.write(reinterpret_cast<const char*>(&name_len), sizeof(name_len));
  out.write(cb.excluded_journey_id.data(), name_len);
  out.write(reinterpret_cast<const char*>(cb.centers.data()),
            std::streamsize(cb.centers.size() * sizeof(float)));
  if (!out) throw DataError("short write: " + path);
}

inline Codebook read_codebook(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open codebook: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (in.gcount() != sizeof(magic) || std::memcmp(magic, kCodebookMagic, sizeof(magic)) != 0)
    throw DataError("bad codebook magic: " + path);
  uint32_t tag = 0, K = 0, D = 0, name_len = 0;
  uint64_t seed = 0;
  in.read(reinterpret_cast<char*>(&tag), sizeof(tag));
  in.read(reinterpret_cast<char*>(&K), sizeof(K));
  in.read(reinterpret_cast<char*>(&D), sizeof(D));
  in.read(reinterpret_cast<char*>(&seed), sizeof(seed));
  in.read(reinterpret_cast<char*>(&name_len), sizeof(name_len));
  if (!in) throw DataError("truncated codebook header: " + path);
  Codebook cb;
  cb.method = method_from_tag(tag);
  cb.K = int(K);
  cb.dim = int(D);
  cb.seed = seed;
  cb.excluded_journey_id.resize(name_len);
  in.read(cb.excluded_journey_id.data(), name_len);
  cb.centers.resize(size_t(K) * size_t(D));
  in.read(reinterpret_cast<char*>(cb.centers.data()),
          std::streamsize(cb.centers.size() * sizeof(float)));
  if (!in) throw DataError("truncated codebook: " + path);
  cb.validate();
  return cb;
}

}  // namespace vpr
