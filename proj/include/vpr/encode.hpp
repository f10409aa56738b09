#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "vpr/descriptor.hpp"
#include "vpr/errors.hpp"
#include "vpr/kmeans.hpp"

namespace vpr {

enum class Encoding { HA, VLAD, DIRECT };

inline const char* encoding_name(Encoding e) {
  switch (e) {
    case Encoding::HA: return "HA";
    case Encoding::VLAD: return "VLAD";
    case Encoding::DIRECT: return "DIRECT";
  }
  return "?";
}

inline Encoding encoding_from_name(const std::string& name) {
  if (name == "HA") return Encoding::HA;
  if (name == "VLAD") return Encoding::VLAD;
  if (name == "DIRECT") return Encoding::DIRECT;
  throw DataError("unknown encoding: " + name);
}

/// One frame's fixed-length code. Values are stored in double so that
/// normalization invariants (unit L1 / unit L2) hold to near machine
/// precision downstream.
struct FrameCode {
  Encoding encoding = Encoding::HA;
  int frame_index = 0;
  bool zero = false;  // no descriptors contributed; excluded from retrieval
  std::vector<double> values;
};

/// Hard-assignment histogram over a codebook: counts normalized to unit L1.
inline FrameCode encode_bow(const DescriptorSet& set, const Codebook& cb,
                            const NearestCenterIndex& index, int jobs = 1) {
  if (set.dim != cb.dim) throw DataError("encode_bow: descriptor/codebook dimension mismatch");
  FrameCode code;
  code.encoding = Encoding::HA;
  code.frame_index = set.frame_index;
  code.values.assign(size_t(cb.K), 0.0);
  const size_t n = set.count();
  if (n == 0) {
    code.zero = true;
    return code;
  }
  std::vector<int> assign(n);
  index.assign(set.data.data(), n, assign.data(), nullptr, jobs);
  for (size_t i = 0; i < n; ++i) code.values[size_t(assign[i])] += 1.0;
  double inv = 1.0 / double(n);
  for (double& v : code.values) v *= inv;
  return code;
}

/// Unnormalized VLAD: per-cluster sums of residuals (descriptor minus its
/// nearest center), flattened K x D. Additive over descriptor subsets.
inline std::vector<double> encode_vlad_raw(const DescriptorSet& set, const Codebook& cb,
                                           const NearestCenterIndex& index, int jobs = 1) {
  if (set.dim != cb.dim) throw DataError("encode_vlad_raw: dimension mismatch");
  std::vector<double> raw(size_t(cb.K) * size_t(cb.dim), 0.0);
  const size_t n = set.count();
  if (n == 0) return raw;
  std::vector<int> assign(n);
  index.assign(set.data.data(), n, assign.data(), nullptr, jobs);
  for (size_t i = 0; i < n; ++i) {
    const float* x = set.vec(i);
    const float* c = cb.center(assign[i]);
    double* acc = raw.data() + size_t(assign[i]) * size_t(cb.dim);
    for (int j = 0; j < cb.dim; ++j) acc[j] += double(x[j]) - double(c[j]);
  }
  return raw;
}

/// VLAD code: signed square root of each component, then global L2
/// normalization.
inline FrameCode encode_vlad(const DescriptorSet& set, const Codebook& cb,
                             const NearestCenterIndex& index, int jobs = 1) {
  FrameCode code;
  code.encoding = Encoding::VLAD;
  code.frame_index = set.frame_index;
  code.values = encode_vlad_raw(set, cb, index, jobs);
  if (set.count() == 0) {
    code.zero = true;
    return code;
  }
  double norm2 = 0.0;
  for (double& v : code.values) {
    v = (v < 0.0) ? -std::sqrt(-v) : std::sqrt(v);
    norm2 += v * v;
  }
  if (norm2 <= 0.0) {
    code.zero = true;
    return code;
  }
  double inv = 1.0 / std::sqrt(norm2);
  for (double& v : code.values) v *= inv;
  return code;
}

/// Direct encoding: the frame's single descriptor, L2-normalized.
inline FrameCode encode_direct(const DescriptorSet& set) {
  if (set.count() != 1)
    throw DataError("encode_direct expects exactly one descriptor per frame, got " +
                    std::to_string(set.count()));
  FrameCode code;
  code.encoding = Encoding::DIRECT;
  code.frame_index = set.frame_index;
  code.values.assign(set.vec(0), set.vec(0) + set.dim);
  double norm2 = 0.0;
  for (double v : code.values) norm2 += v * v;
  if (norm2 <= 0.0) {
    code.zero = true;
    return code;
  }
  double inv = 1.0 / std::sqrt(norm2);
  for (double& v : code.values) v *= inv;
  return code;
}

/// Encode every frame record of a descriptor dump. The codebook may be
/// null only for DIRECT encoding.
inline std::vector<FrameCode> encode_dump(const std::string& dump_path, Encoding encoding,
                                          const Codebook* cb, int jobs = 1) {
  std::vector<FrameCode> codes;
  DescriptorDumpReader reader(dump_path);
  DescriptorSet rec;
  if (encoding == Encoding::DIRECT) {
    while (reader.next(rec)) codes.push_back(encode_direct(rec));
    return codes;
  }
  if (!cb) throw DataError("encode_dump: codebook required for " +
                           std::string(encoding_name(encoding)));
  NearestCenterIndex index(*cb);
  while (reader.next(rec)) {
    codes.push_back(encoding == Encoding::HA ? encode_bow(rec, *cb, index, jobs)
                                             : encode_vlad(rec, *cb, index, jobs));
  }
  return codes;
}

// ---- Frame-code archive: one file per (journey, method, encoding).

constexpr char kCodeMagic[8] = {'V', 'P', 'C', 'O', 'D', 'S', '0', '1'};

inline void write_frame_codes(const std::string& path, const std::vector<FrameCode>& codes,
                              Method method) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write frame codes: " + path);
  out.write(kCodeMagic, sizeof(kCodeMagic));
  uint32_t tag = method_tag(method);
  uint32_t enc = codes.empty() ? 0u : uint32_t(codes.front().encoding);
  uint32_t count = uint32_t(codes.size());
  uint32_t width = codes.empty() ? 0u : uint32_t(codes.front().values.size());
  out.write(reinterpret_cast<const char*>(&tag), sizeof(tag));
  out.write(reinterpret_cast<const char*>(&enc), sizeof(enc));
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  out.write(reinterpret_cast<const char*>(&width), sizeof(width));
  for (const FrameCode& c : codes) {
    if (c.values.size() != size_t(width))
      throw DataError("frame code width mismatch in archive");
    int32_t frame = int32_t(c.frame_index);
    uint32_t zero = c.zero ? 1u : 0u;
    out.write(reinterpret_cast<const char*>(&frame), sizeof(frame));
    out.write(reinterpret_cast<const char*>(&zero), sizeof(zero));
    out.write(reinterpret_cast<const char*>(c.values.data()),
              std::streamsize(c.values.size() * sizeof(double)));
  }
  if (!out) throw DataError("short write: " + path);
}

inline std::vector<FrameCode> read_frame_codes(const std::string& path, Method* method_out = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open frame codes: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (in.gcount() != sizeof(magic) || std::memcmp(magic, kCodeMagic, sizeof(magic)) != 0)
    throw DataError("bad frame-code magic: " + path);
  uint32_t tag = 0, enc = 0, count = 0, width = 0;
  in.read(reinterpret_cast<char*>(&tag), sizeof(tag));
  in.read(reinterpret_cast<char*>(&enc), sizeof(enc));
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  in.read(reinterpret_cast<char*>(&width), sizeof(width));
  if (!in) throw DataError("truncated frame-code header: " + path);
  if (method_out) *method_out = method_from_tag(tag);
  std::vector<FrameCode> codes(count);
  for (uint32_t i = 0; i < count; ++i) {
    int32_t frame = 0;
    uint32_t zero = 0;
    in.read(reinterpret_cast<char*>(&frame), sizeof(frame));
    in.read(reinterpret_cast<char*>(&zero), sizeof(zero));
    codes[i].encoding = Encoding(enc);
    codes[i].frame_index = int(frame);
    codes[i].zero = zero != 0;
    codes[i].values.resize(width);
    in.read(reinterpret_cast<char*>(codes[i].values.data()),
            std::streamsize(size_t(width) * sizeof(double)));
  }
  if (!in) throw DataError("truncated frame codes: " + path);
  return codes;
}

}  // namespace vpr
