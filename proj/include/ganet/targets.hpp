/* Copyright 2026 The ganet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef GANET_TARGETS_HPP_
#define GANET_TARGETS_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "ganet/box.hpp"
#include "ganet/error.hpp"

namespace ganet {

// Fraction of a box's width and height that defines its positive (central)
// region on the score map.
inline constexpr double kPositiveShrink = 0.7;

enum Corner : std::size_t { kTopLeft = 0, kTopRight = 1, kBottomLeft = 2, kBottomRight = 3 };

// Ground truth for one image at output stride. Planes are row-major h x w;
// `location` and `corners` hold 4 planes each, in (l, t, r, b) and
// (tl, tr, bl, br) order.
struct TargetMaps {
  std::size_t h = 0;
  std::size_t w = 0;
  std::size_t stride = 1;
  std::vector<double> score;
  std::vector<double> location;
  std::vector<double> corners;
  std::vector<unsigned char> valid;
  int ba_label = -1;
  std::vector<std::size_t> skipped;  // indices of degenerate input boxes

  std::size_t plane() const { return h * w; }
  std::size_t positives() const {
    std::size_t n = 0;
    for (auto v : valid) n += v;
    return n;
  }
};

// Image-space center of a prediction-map cell.
inline double cell_center(std::size_t i, std::size_t stride) {
  return (static_cast<double>(i) + 0.5) * static_cast<double>(stride);
}

inline Box shrink_box(const Box& b, double factor) {
  const double hw = 0.5 * b.width() * factor;
  const double hh = 0.5 * b.height() * factor;
  return Box{b.cx() - hw, b.cy() - hh, b.cx() + hw, b.cy() + hh};
}

// Region of corner `s` of a box: the (w/3) x (h/3) sub-rectangle at that corner.
inline Box corner_region(const Box& b, std::size_t s) {
  const double cw = b.width() / 3.0;
  const double ch = b.height() / 3.0;
  const bool right = s == kTopRight || s == kBottomRight;
  const bool bottom = s == kBottomLeft || s == kBottomRight;
  const double x1 = right ? b.x2 - cw : b.x1;
  const double y1 = bottom ? b.y2 - ch : b.y1;
  return Box{x1, y1, x1 + cw, y1 + ch};
}

inline bool contains_point(const Box& b, double x, double y) { return x >= b.x1 && x < b.x2 && y >= b.y1 && y < b.y2; }

inline TargetMaps encode_targets(const std::vector<Box>& boxes, std::size_t image_w, std::size_t image_h,
                                 std::size_t stride) {
  require(stride > 0 && image_w % stride == 0 && image_h % stride == 0, "losses-targets",
          "stride " + std::to_string(stride) + " does not divide image size");
  TargetMaps t;
  t.stride = stride;
  t.h = image_h / stride;
  t.w = image_w / stride;
  const std::size_t plane = t.plane();
  t.score.assign(plane, 0.0);
  t.location.assign(4 * plane, 0.0);
  t.corners.assign(4 * plane, 0.0);
  t.valid.assign(plane, 0);
  t.ba_label = boxes.empty() ? -1 : 1;

  const double min_side = 2.0 * static_cast<double>(stride);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const Box& b = boxes[i];
    require(b.x1 >= 0.0 && b.y1 >= 0.0 && b.x2 <= static_cast<double>(image_w) &&
                b.y2 <= static_cast<double>(image_h) && b.x1 < b.x2 && b.y1 < b.y2,
            "losses-targets", "box " + std::to_string(i) + " lies outside the image or is inverted");
    if (b.width() < min_side || b.height() < min_side) {
      t.skipped.push_back(i);
      continue;
    }
    const Box core = shrink_box(b, kPositiveShrink);
    std::array<Box, 4> regions;
    for (std::size_t s = 0; s < 4; ++s) regions[s] = corner_region(b, s);
    for (std::size_t py = 0; py < t.h; ++py) {
      const double y = cell_center(py, stride);
      if (y < b.y1 || y >= b.y2) continue;
      for (std::size_t px = 0; px < t.w; ++px) {
        const double x = cell_center(px, stride);
        if (x < b.x1 || x >= b.x2) continue;
        const std::size_t idx = py * t.w + px;
        for (std::size_t s = 0; s < 4; ++s) {
          t.corners[s * plane + idx] = contains_point(regions[s], x, y) ? 1.0 : 0.0;
        }
        if (x >= core.x1 && x <= core.x2 && y >= core.y1 && y <= core.y2) {
          t.score[idx] = 1.0;
          t.valid[idx] = 1;
          t.location[0 * plane + idx] = x - b.x1;
          t.location[1 * plane + idx] = y - b.y1;
          t.location[2 * plane + idx] = b.x2 - x;
          t.location[3 * plane + idx] = b.y2 - y;
        }
      }
    }
  }
  return t;
}

}  // namespace ganet

#endif  // GANET_TARGETS_HPP_
