#pragma once

#include <png.h>

#include <array>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vpr/errors.hpp"
#include "vpr/plane.hpp"

namespace vpr {

struct RgbImage {
  int width = 0;
  int height = 0;
  std::array<Plane, 3> planes;  // [0,1] intensities
};

namespace detail {

// Netpbm token reader: skips whitespace and '#' comments.
inline std::string pnm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) {
      tok.push_back(char(c));
      break;
    }
  }
  while ((c = in.get()) != EOF && !std::isspace(c)) tok.push_back(char(c));
  return tok;
}

inline int pnm_int(std::istream& in, const std::string& path) {
  std::string tok = pnm_token(in);
  if (tok.empty()) throw DataError("truncated PNM header: " + path);
  return std::stoi(tok);
}

}  // namespace detail

/// Read P2/P3/P5/P6 Netpbm. Grayscale formats replicate into all channels.
inline RgbImage read_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open image: " + path);
  std::string magic = detail::pnm_token(in);
  bool gray = (magic == "P2" || magic == "P5");
  bool binary = (magic == "P5" || magic == "P6");
  if (!gray && magic != "P3" && magic != "P6") throw DataError("unsupported PNM magic '" + magic + "': " + path);
  int w = detail::pnm_int(in, path);
  int h = detail::pnm_int(in, path);
  int maxval = detail::pnm_int(in, path);
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) throw DataError("bad PNM header: " + path);
  int channels = gray ? 1 : 3;
  size_t count = size_t(w) * h * channels;
  std::vector<double> raw(count);
  if (binary) {
    // Single whitespace byte separates header from raster.
    int bytes_per = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> buf(count * bytes_per);
    in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
    if (size_t(in.gcount()) != buf.size()) throw DataError("truncated PNM raster: " + path);
    for (size_t i = 0; i < count; ++i)
      raw[i] = bytes_per == 1 ? buf[i] : (buf[2 * i] << 8 | buf[2 * i + 1]);
  } else {
    for (size_t i = 0; i < count; ++i) raw[i] = detail::pnm_int(in, path);
  }
  RgbImage img;
  img.width = w;
  img.height = h;
  for (auto& p : img.planes) p = Plane(h, w);
  for (size_t i = 0; i < size_t(w) * h; ++i) {
    for (int c = 0; c < 3; ++c) {
      double v = raw[i * channels + (gray ? 0 : c)] / maxval;
      img.planes[c].values[i] = float(v < 0 ? 0 : (v > 1 ? 1 : v));
    }
  }
  return img;
}

inline RgbImage read_png(const std::string& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str()))
    throw DataError(std::string("PNG read failed: ") + path + " (" + png.message + ")");
  png.format = PNG_FORMAT_RGB;
  std::vector<unsigned char> buf(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buf.data(), 0, nullptr)) {
    std::string msg = png.message;
    png_image_free(&png);
    throw DataError("PNG decode failed: " + path + " (" + msg + ")");
  }
  RgbImage img;
  img.width = int(png.width);
  img.height = int(png.height);
  for (auto& p : img.planes) p = Plane(img.height, img.width);
  for (size_t i = 0; i < size_t(img.width) * img.height; ++i)
    for (int c = 0; c < 3; ++c) img.planes[c].values[i] = buf[3 * i + c] / 255.f;
  return img;
}

/// Dispatch on extension (.png vs Netpbm).
inline RgbImage read_image(const std::string& path) {
  auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  for (auto& ch : ext) ch = char(std::tolower(ch));
  if (ext == ".png") return read_png(path);
  return read_pnm(path);
}

inline void write_ppm(const std::string& path, const RgbImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write image: " + path);
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  std::vector<unsigned char> buf(size_t(img.width) * img.height * 3);
  for (size_t i = 0; i < size_t(img.width) * img.height; ++i)
    for (int c = 0; c < 3; ++c) {
      float v = img.planes[c].values[i];
      v = v < 0 ? 0 : (v > 1 ? 1 : v);
      buf[3 * i + c] = (unsigned char)(v * 255.f + 0.5f);
    }
  out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
  if (!out) throw DataError("short write: " + path);
}

inline void write_pgm(const std::string& path, const Plane& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write image: " + path);
  out << "P5\n" << p.width << " " << p.height << "\n255\n";
  std::vector<unsigned char> buf(p.size());
  for (size_t i = 0; i < p.size(); ++i) {
    float v = p.values[i];
    v = v < 0 ? 0 : (v > 1 ? 1 : v);
    buf[i] = (unsigned char)(v * 255.f + 0.5f);
  }
  out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
  if (!out) throw DataError("short write: " + path);
}

namespace detail {

// Per-output-index source spans with exact fractional-overlap weights.
struct ResampleSpan {
  int begin = 0;
  std::vector<float> weights;
};

inline std::vector<ResampleSpan> box_spans(int src, int dst) {
  std::vector<ResampleSpan> spans(dst);
  double scale = double(src) / dst;
  for (int o = 0; o < dst; ++o) {
    double lo = o * scale, hi = (o + 1) * scale;
    int b = int(lo), e = int(std::ceil(hi));
    if (e > src) e = src;
    spans[o].begin = b;
    spans[o].weights.resize(size_t(e - b));
    for (int s = b; s < e; ++s) {
      double cover = std::min<double>(hi, s + 1) - std::max<double>(lo, s);
      spans[o].weights[size_t(s - b)] = float(cover / scale);
    }
  }
  return spans;
}

}  // namespace detail

/// Area-average (box) resampling: each output pixel is the mean of the
/// source area it covers, with fractional pixels weighted by overlap.
inline Plane resize_area(const Plane& src, int out_h, int out_w) {
  if (out_h <= 0 || out_w <= 0) throw std::invalid_argument("resize_area: non-positive output size");
  if (src.height == out_h && src.width == out_w) return src;
  auto xs = detail::box_spans(src.width, out_w);
  auto ys = detail::box_spans(src.height, out_h);
  Plane tmp(src.height, out_w);
  for (int y = 0; y < src.height; ++y) {
    const float* in = src.row(y);
    float* out = tmp.row(y);
    for (int x = 0; x < out_w; ++x) {
      const auto& sp = xs[x];
      double acc = 0.0;
      for (size_t i = 0; i < sp.weights.size(); ++i) acc += double(in[sp.begin + int(i)]) * sp.weights[i];
      out[x] = float(acc);
    }
  }
  Plane dst(out_h, out_w);
  for (int y = 0; y < out_h; ++y) {
    const auto& sp = ys[y];
    float* out = dst.row(y);
    for (int x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (size_t i = 0; i < sp.weights.size(); ++i) acc += double(tmp.at(sp.begin + int(i), x)) * sp.weights[i];
      out[x] = float(acc);
    }
  }
  return dst;
}

inline RgbImage resize_area(const RgbImage& src, int out_h, int out_w) {
  RgbImage out;
  out.width = out_w;
  out.height = out_h;
  for (int c = 0; c < 3; ++c) out.planes[c] = resize_area(src.planes[c], out_h, out_w);
  return out;
}

}  // namespace vpr
