#pragma once

#include <stdexcept>
#include <vector>

#include "vpr/errors.hpp"
#include "vpr/journey.hpp"

namespace vpr {

/// A full, centered run of consecutive frames around one center frame.
/// Only emitted when complete — sequence edges are skipped, not padded.
struct TemporalWindow {
  int length = 0;                     // odd
  int center = 0;                     // frame index of the middle frame
  std::vector<const Frame*> frames;   // `length` contiguous frames

  /// Frame at signed offset from the center, offset in [-length/2, length/2].
  const Frame& at_offset(int offset) const { return *frames[size_t(offset + length / 2)]; }
  const Frame& center_frame() const { return *frames[size_t(length / 2)]; }
};

/// All full windows of the journey, in center order: centers
/// length/2 .. frame_count-1-length/2.
inline std::vector<TemporalWindow> temporal_window_stream(const Journey& journey, int length) {
  if (length < 3 || length % 2 == 0) throw std::invalid_argument("temporal window length must be odd and >= 3");
  if (!journey.pixels_loaded())
    throw DataError(journey.journey_id + ": frames not loaded for temporal windowing");
  int n = int(journey.frame_count());
  if (n < length)
    throw DataError(journey.journey_id + ": journey of " + std::to_string(n) +
                    " frames shorter than temporal window " + std::to_string(length));
  int half = length / 2;
  std::vector<TemporalWindow> out;
  out.reserve(size_t(n - length + 1));
  for (int center = half; center < n - half; ++center) {
    TemporalWindow w;
    w.length = length;
    w.center = center;
    w.frames.reserve(size_t(length));
    for (int i = center - half; i <= center + half; ++i) w.frames.push_back(&journey.frames[size_t(i)]);
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace vpr
