#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "vpr/errors.hpp"

namespace vpr {

enum class Method { SIFT, SF_GABOR, LW_COLOR, ST_GABOR, ST_GAUSS };

constexpr Method kAllMethods[] = {Method::SIFT, Method::SF_GABOR, Method::LW_COLOR,
                                 Method::ST_GABOR, Method::ST_GAUSS};

inline const char* method_name(Method m) {
  switch (m) {
    case Method::SIFT: return "SIFT";
    case Method::SF_GABOR: return "SF_GABOR";
    case Method::LW_COLOR: return "LW_COLOR";
    case Method::ST_GABOR: return "ST_GABOR";
    case Method::ST_GAUSS: return "ST_GAUSS";
  }
  return "?";
}

inline Method method_from_name(const std::string& name) {
  for (Method m : kAllMethods)
    if (name == method_name(m)) return m;
  throw DataError("unknown descriptor method: " + name);
}

/// Output dimensionality of each extractor.
inline int method_dim(Method m) {
  switch (m) {
    case Method::SIFT: return 128;
    case Method::SF_GABOR: return 136;   // 17 pooling regions x 8 orientations
    case Method::LW_COLOR: return 144;   // 9 gradient components x 16 regions
    case Method::ST_GABOR: return 221;   // 17 pooling regions x 13 direction bins
    case Method::ST_GAUSS: return 136;   // 17 pooling regions x 8 orientation bins
  }
  return 0;
}

/// Temporal support in frames (1 = single-frame method).
inline int method_window(Method m) {
  switch (m) {
    case Method::SIFT:
    case Method::SF_GABOR: return 1;
    case Method::LW_COLOR: return 11;
    case Method::ST_GABOR: return 9;
    case Method::ST_GAUSS: return 11;
  }
  return 1;
}

/// Spatial patch support in pixels.
inline int method_support(Method m) {
  switch (m) {
    case Method::SIFT: return 11;
    case Method::SF_GABOR: return 11;
    case Method::LW_COLOR: return 0;   // frame-level; no patch grid
    case Method::ST_GABOR: return 16;
    case Method::ST_GAUSS: return 11;
  }
  return 0;
}

inline uint32_t method_tag(Method m) {
  switch (m) {
    case Method::SIFT: return 1;
    case Method::SF_GABOR: return 2;
    case Method::LW_COLOR: return 3;
    case Method::ST_GABOR: return 4;
    case Method::ST_GAUSS: return 5;
  }
  return 0;
}

inline Method method_from_tag(uint32_t tag) {
  for (Method m : kAllMethods)
    if (method_tag(m) == tag) return m;
  throw DataError("unknown descriptor method tag: " + std::to_string(tag));
}

/// Shared dense sampling grid: patch centers every kGridStride pixels,
/// kGridMargin from the border, identical for all patch-based methods.
constexpr int kGridMargin = 8;
constexpr int kGridStride = 3;

inline std::vector<std::pair<int, int>> dense_grid(int height, int width) {
  if (width <= 2 * kGridMargin || height <= 2 * kGridMargin)
    throw DataError("frame " + std::to_string(width) + "x" + std::to_string(height) +
                    " smaller than patch support");
  std::vector<std::pair<int, int>> grid;
  for (int y = kGridMargin; y <= height - 1 - kGridMargin; y += kGridStride)
    for (int x = kGridMargin; x <= width - 1 - kGridMargin; x += kGridStride)
      grid.emplace_back(x, y);
  return grid;
}

/// Dense descriptors of one frame (or one temporal window centered on it):
/// one fixed-dimension vector per grid point, stored row-major.
struct DescriptorSet {
  Method method = Method::SIFT;
  int frame_index = 0;
  int support = 0;                           // patch side in pixels (0 = frame-level)
  std::vector<std::pair<int, int>> grid;     // (x, y) patch centers
  int dim = 0;
  std::vector<float> data;                   // count() * dim, row-major

  size_t count() const { return grid.size(); }
  const float* vec(size_t i) const { return data.data() + i * size_t(dim); }
  float* vec(size_t i) { return data.data() + i * size_t(dim); }

  void validate() const {
    if (dim != method_dim(method)) throw DataError("descriptor dim mismatch for " + std::string(method_name(method)));
    if (data.size() != grid.size() * size_t(dim)) throw DataError("descriptor count/grid mismatch");
    for (float v : data)
      if (!std::isfinite(v)) throw DataError("non-finite descriptor entry");
  }
};

// ---- Dump format: cache of extracted descriptors, one file per journey
// per method. Layout: 8-byte magic, then per-frame records of
// {u32 method_tag, u32 dim, u32 count, i32 frame_index} + count*dim f32.

constexpr char kDescMagic[8] = {'V', 'P', 'D', 'E', 'S', 'C', '0', '1'};

struct DescRecordHeader {
  uint32_t tag = 0;
  uint32_t dim = 0;
  uint32_t count = 0;
  int32_t frame_index = 0;
};

class DescriptorDumpWriter {
public:
  explicit DescriptorDumpWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw DataError("cannot write descriptor dump: " + path);
    out_.write(kDescMagic, sizeof(kDescMagic));
  }

  void append(const DescriptorSet& set) {
    DescRecordHeader h{method_tag(set.method), uint32_t(set.dim), uint32_t(set.count()),
                       int32_t(set.frame_index)};
    out_.write(reinterpret_cast<const char*>(&h), sizeof(h));
    out_.write(reinterpret_cast<const char*>(set.data.data()),
               std::streamsize(set.data.size() * sizeof(float)));
    if (!out_) throw DataError("short write: " + path_);
  }

  void close() { out_.close(); }

private:
  std::string path_;
  std::ofstream out_;
};

class DescriptorDumpReader {
public:
  explicit DescriptorDumpReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw DataError("cannot open descriptor dump: " + path);
    char magic[8];
    in_.read(magic, sizeof(magic));
    if (in_.gcount() != sizeof(magic) || std::memcmp(magic, kDescMagic, sizeof(magic)) != 0)
      throw DataError("bad descriptor dump magic: " + path);
  }

  /// Read the next record into `set`; false at clean end-of-file.
  /// The stored grid is positional metadata only, so readers get a
  /// nominal grid of the right cardinality.
  bool next(DescriptorSet& set) {
    DescRecordHeader h;
    in_.read(reinterpret_cast<char*>(&h), sizeof(h));
    if (in_.gcount() == 0) return false;
    if (in_.gcount() != sizeof(h)) throw DataError("truncated descriptor dump: " + path_);
    set.method = method_from_tag(h.tag);
    set.dim = int(h.dim);
    if (set.dim != method_dim(set.method)) throw DataError("descriptor dump dim mismatch: " + path_);
    set.frame_index = int(h.frame_index);
    set.support = method_support(set.method);
    set.grid.assign(h.count, {0, 0});
    set.data.resize(size_t(h.count) * h.dim);
    in_.read(reinterpret_cast<char*>(set.data.data()), std::streamsize(set.data.size() * sizeof(float)));
    if (size_t(in_.gcount()) != set.data.size() * sizeof(float))
      throw DataError("truncated descriptor dump: " + path_);
    return true;
  }

private:
  std::string path_;
  std::ifstream in_;
};

inline std::vector<DescriptorSet> read_descriptor_dump(const std::string& path) {
  DescriptorDumpReader reader(path);
  std::vector<DescriptorSet> out;
  DescriptorSet set;
  while (reader.next(set)) out.push_back(set);
  return out;
}

}  // namespace vpr
