#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "cliptrack/error.hpp"

namespace cliptrack {

// Axis-aligned box with corners expressed as fractions of the frame size.
// Boxes derived from masks stay inside [0,1]; extrapolated boxes may not.
struct NormalizedBox {
  double x_tl = 0.0;
  double y_tl = 0.0;
  double x_br = 0.0;
  double y_br = 0.0;

  friend bool operator==(const NormalizedBox&, const NormalizedBox&) = default;
};

inline double squared_distance(const NormalizedBox& a, const NormalizedBox& b) {
  const double dx0 = a.x_tl - b.x_tl;
  const double dy0 = a.y_tl - b.y_tl;
  const double dx1 = a.x_br - b.x_br;
  const double dy1 = a.y_br - b.y_br;
  return dx0 * dx0 + dy0 * dy0 + dx1 * dx1 + dy1 * dy1;
}

// Per-frame foreground region stored as row-major run lengths that
// alternate background/foreground, always starting with a background run
// (possibly of length zero).
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> runs;

  std::int64_t pixel_count() const {
    return static_cast<std::int64_t>(width) * height;
  }

  std::int64_t area() const {
    std::int64_t total = 0;
    for (std::size_t i = 1; i < runs.size(); i += 2) total += runs[i];
    return total;
  }

  bool empty() const { return area() == 0; }

  // Checks the structural invariants; returns false instead of throwing so
  // readers can attach file/line context to the failure.
  bool valid() const {
    if (width <= 0 || height <= 0) return false;
    std::int64_t total = 0;
    for (auto r : runs) total += r;
    return total == pixel_count();
  }

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

inline BinaryMask rle_encode(const std::vector<std::uint8_t>& bitmap, int width,
                             int height) {
  if (width <= 0 || height <= 0 ||
      bitmap.size() != static_cast<std::size_t>(width) * height)
    fail("ShapeMismatch", "bitmap size does not match width*height");
  BinaryMask mask{width, height, {}};
  std::uint8_t current = 0;  // runs start on background
  std::uint32_t length = 0;
  for (std::uint8_t pixel : bitmap) {
    const std::uint8_t value = pixel ? 1 : 0;
    if (value == current) {
      ++length;
    } else {
      mask.runs.push_back(length);
      current = value;
      length = 1;
    }
  }
  mask.runs.push_back(length);
  return mask;
}

inline std::vector<std::uint8_t> rle_decode(const BinaryMask& mask) {
  if (!mask.valid()) fail("InvalidRLE", "run lengths do not cover the frame");
  std::vector<std::uint8_t> bitmap(static_cast<std::size_t>(mask.pixel_count()));
  std::size_t pos = 0;
  std::uint8_t value = 0;
  for (auto run : mask.runs) {
    std::fill_n(bitmap.begin() + pos, run, value);
    pos += run;
    value = !value;
  }
  return bitmap;
}

// Tight box over the foreground, pixel-center convention: a full-frame mask
// maps to [0,0,1,1], a single pixel at (0,0) of a 10x10 frame to
// [0,0,0.1,0.1].
inline NormalizedBox mask_to_normalized_box(const BinaryMask& mask) {
  if (!mask.valid()) fail("InvalidRLE", "run lengths do not cover the frame");
  int min_row = mask.height, max_row = -1;
  int min_col = mask.width, max_col = -1;
  std::int64_t pos = 0;
  bool foreground = false;
  for (auto run : mask.runs) {
    if (foreground && run > 0) {
      const std::int64_t first = pos;
      const std::int64_t last = pos + run - 1;
      min_row = std::min<int>(min_row, static_cast<int>(first / mask.width));
      max_row = std::max<int>(max_row, static_cast<int>(last / mask.width));
      if (first / mask.width == last / mask.width) {
        min_col = std::min<int>(min_col, static_cast<int>(first % mask.width));
        max_col = std::max<int>(max_col, static_cast<int>(last % mask.width));
      } else {
        // The run wraps at least one row boundary, so it spans full rows in
        // between; only the partial first and last rows constrain columns.
        min_col = 0;
        max_col = mask.width - 1;
        min_col = std::min<int>(min_col, static_cast<int>(first % mask.width));
        max_col = std::max<int>(max_col, static_cast<int>(last % mask.width));
      }
      pos += run;
    } else {
      pos += run;
    }
    foreground = !foreground;
  }
  if (max_row < 0) fail("EmptyMask", "mask has no foreground pixels");
  return NormalizedBox{
      static_cast<double>(min_col) / mask.width,
      static_cast<double>(min_row) / mask.height,
      static_cast<double>(max_col + 1) / mask.width,
      static_cast<double>(max_row + 1) / mask.height,
  };
}

namespace detail {

// Walks two RLE streams in lockstep, accumulating the overlap of
// foreground runs without decoding either mask.
inline std::int64_t rle_intersection_area(const BinaryMask& a,
                                          const BinaryMask& b) {
  std::int64_t inter = 0;
  std::size_t ia = 0, ib = 0;
  std::int64_t ra = ia < a.runs.size() ? a.runs[ia] : 0;
  std::int64_t rb = ib < b.runs.size() ? b.runs[ib] : 0;
  bool va = false, vb = false;
  std::int64_t remaining = a.pixel_count();
  while (remaining > 0) {
    while (ra == 0 && ia + 1 < a.runs.size()) {
      va = !va;
      ra = a.runs[++ia];
    }
    while (rb == 0 && ib + 1 < b.runs.size()) {
      vb = !vb;
      rb = b.runs[++ib];
    }
    const std::int64_t step = std::min({ra, rb, remaining});
    if (step <= 0) break;
    if (va && vb) inter += step;
    ra -= step;
    rb -= step;
    remaining -= step;
  }
  return inter;
}

}  // namespace detail

inline double mask_iou(const BinaryMask& a, const BinaryMask& b) {
  if (a.width != b.width || a.height != b.height)
    fail("ShapeMismatch", "mask dimensions differ");
  const std::int64_t inter = detail::rle_intersection_area(a, b);
  const std::int64_t uni = a.area() + b.area() - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace cliptrack
