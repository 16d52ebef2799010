#pragma once

#include <cstdint>
#include <vector>

#include "cliptrack/error.hpp"
#include "cliptrack/mask.hpp"

namespace cliptrack {

using Embedding = std::vector<double>;

inline double dot(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size()) fail("ShapeMismatch", "embedding dimensions differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

inline double norm(const Embedding& a) { return std::sqrt(dot(a, a)); }

// One detected object instance in one frame.
struct Detection {
  int frame_index = 0;
  int class_id = 0;
  double score = 1.0;
  BinaryMask mask;
  Embedding embedding;

  NormalizedBox box() const { return mask_to_normalized_box(mask); }
};

// One object's detections across the frames of a clip. An object may be
// absent from some frames; frame indexes are strictly increasing.
struct Tube {
  int clip_local_id = 0;
  int class_id = 0;
  std::vector<Detection> detections;

  const Detection& last_detection() const {
    if (detections.empty()) fail("EmptyTube", "tube has no detections");
    return detections.back();
  }

  const Detection* detection_at(int frame_index) const {
    for (const auto& det : detections)
      if (det.frame_index == frame_index) return &det;
    return nullptr;
  }
};

struct Clip {
  int first_frame = 0;
  int length = 1;
  std::vector<Tube> tubes;

  int last_frame() const { return first_frame + length - 1; }

  bool contains_frame(int frame_index) const {
    return frame_index >= first_frame && frame_index <= last_frame();
  }
};

inline void validate_tube(const Tube& tube, const Clip& clip) {
  int previous = clip.first_frame - 1;
  for (const auto& det : tube.detections) {
    if (det.class_id != tube.class_id)
      fail("ClassMismatch", "detection class differs from tube class");
    if (det.frame_index <= previous)
      fail("FrameOrder", "tube frame indexes must be strictly increasing");
    if (!clip.contains_frame(det.frame_index))
      fail("FrameRange", "detection frame outside the clip range");
    if (det.mask.empty()) fail("EmptyMask", "detection mask has no foreground");
    previous = det.frame_index;
  }
}

}  // namespace cliptrack
