#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <type_traits>

#include "vpr/errors.hpp"

namespace vpr {

/// Streaming FNV-1a (64-bit). Content-addresses cache entries; not
/// cryptographic.
class Hasher {
public:
  Hasher& bytes(const void* data, size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }

  Hasher& str(std::string_view s) {
    bytes(s.data(), s.size());
    return bytes("\x1f", 1);  // separator so ("ab","c") != ("a","bc")
  }

  template <typename T>
  Hasher& pod(const T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    return bytes(&v, sizeof(v));
  }

  Hasher& file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open for hashing: " + path);
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) bytes(buf, size_t(in.gcount()));
    return *this;
  }

  uint64_t digest() const { return state_; }

  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(state_));
    return buf;
  }

private:
  uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace vpr
