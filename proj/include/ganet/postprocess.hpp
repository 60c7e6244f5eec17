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
#ifndef GANET_POSTPROCESS_HPP_
#define GANET_POSTPROCESS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ganet/box.hpp"
#include "ganet/error.hpp"
#include "ganet/net.hpp"
#include "ganet/targets.hpp"

namespace ganet {

struct PostprocessConfig {
  double mu = 0.8;
  double nms_iou = 0.2;
  double epsilon = 0.3;
  int kappa = 1;
  std::size_t top_k = 200;
  double count_threshold = 0.5;

  void validate() const {
    require(mu >= 0.0 && mu <= 1.0, "postprocess", "mu must lie in [0,1]");
    require(nms_iou >= 0.0 && nms_iou <= 1.0, "postprocess", "nms_iou must lie in [0,1]");
    require(epsilon >= 0.0 && epsilon <= 1.0, "postprocess", "epsilon must lie in [0,1]");
    require(kappa >= 0 && kappa <= 4, "postprocess", "kappa must lie in 0..4");
    require(top_k >= 1, "postprocess", "top_k must be at least 1");
    require(count_threshold >= 0.0 && count_threshold <= 1.0, "postprocess", "count_threshold must lie in [0,1]");
  }
};

// Prediction maps of a single image at output stride, in double precision.
struct PredictionMaps {
  std::size_t h = 0;
  std::size_t w = 0;
  std::size_t stride = kOutputStride;
  std::vector<double> score;     // h*w
  std::vector<double> location;  // 4*h*w
  std::vector<double> corners;   // 4*h*w

  std::size_t plane() const { return h * w; }
};

template <typename T>
PredictionMaps extract_maps(const NetOutputs<T>& out, std::size_t n) {
  PredictionMaps m;
  const Shape s = out.score->shape();
  m.h = s.h;
  m.w = s.w;
  const std::size_t plane = s.plane();
  auto copy = [&](const Tensor<T>& t, std::size_t channels, std::vector<double>& dst) {
    dst.resize(channels * plane);
    const T* src = t.data() + n * channels * plane;
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<double>(src[i]);
  };
  copy(*out.score, 1, m.score);
  copy(*out.location, 4, m.location);
  copy(*out.corners, 4, m.corners);
  return m;
}

inline PredictionMaps maps_from_targets(const TargetMaps& t) {
  PredictionMaps m;
  m.h = t.h;
  m.w = t.w;
  m.stride = t.stride;
  m.score = t.score;
  m.location = t.location;
  m.corners = t.corners;
  return m;
}

// Every cell with score >= mu proposes the box spanned by its four distances.
inline std::vector<Detection> decode_candidates(const PredictionMaps& m, double image_w, double image_h, double mu) {
  std::vector<Detection> dets;
  const std::size_t plane = m.plane();
  for (std::size_t py = 0; py < m.h; ++py) {
    for (std::size_t px = 0; px < m.w; ++px) {
      const std::size_t i = py * m.w + px;
      const double c = m.score[i];
      if (!(c >= mu)) continue;
      const double x = cell_center(px, m.stride);
      const double y = cell_center(py, m.stride);
      const Box raw{x - m.location[i], y - m.location[plane + i], x + m.location[2 * plane + i],
                    y + m.location[3 * plane + i]};
      const Box b = clip_box(raw, image_w, image_h);
      if (!(b.x1 < b.x2 && b.y1 < b.y2)) continue;
      dets.push_back(Detection{b, c, px, py});
    }
  }
  return dets;
}

// Confidence descending; ties broken by source cell in row-major order.
inline void sort_by_confidence(std::vector<Detection>& dets) {
  std::stable_sort(dets.begin(), dets.end(), [](const Detection& a, const Detection& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.source_y != b.source_y) return a.source_y < b.source_y;
    return a.source_x < b.source_x;
  });
}

inline std::vector<Detection> nms(std::vector<Detection> dets, double iou_thr) {
  sort_by_confidence(dets);
  std::vector<Detection> kept;
  for (const auto& d : dets) {
    bool keep = true;
    for (const auto& k : kept) {
      if (iou(d.box, k.box) >= iou_thr) {
        keep = false;
        break;
      }
    }
    if (keep) kept.push_back(d);
  }
  return kept;
}

// Mean of `plane` over the cells whose centers fall inside `region`; falls
// back to the single cell under the region's center when none do.
inline double region_mean(const double* plane, std::size_t h, std::size_t w, std::size_t stride, const Box& region) {
  double acc = 0.0;
  std::size_t cnt = 0;
  const double sd = static_cast<double>(stride);
  const auto lo = [sd](double v) { return static_cast<std::ptrdiff_t>(std::ceil(v / sd - 0.5)); };
  const std::ptrdiff_t x0 = std::max<std::ptrdiff_t>(0, lo(region.x1));
  const std::ptrdiff_t y0 = std::max<std::ptrdiff_t>(0, lo(region.y1));
  for (auto py = y0; py < static_cast<std::ptrdiff_t>(h); ++py) {
    const double y = cell_center(static_cast<std::size_t>(py), stride);
    if (y >= region.y2) break;
    if (y < region.y1) continue;
    for (auto px = x0; px < static_cast<std::ptrdiff_t>(w); ++px) {
      const double x = cell_center(static_cast<std::size_t>(px), stride);
      if (x >= region.x2) break;
      if (x < region.x1) continue;
      acc += plane[static_cast<std::size_t>(py) * w + static_cast<std::size_t>(px)];
      ++cnt;
    }
  }
  if (cnt > 0) return acc / static_cast<double>(cnt);
  const auto cell = [sd](double v, std::size_t len) {
    const auto i = static_cast<std::ptrdiff_t>(std::floor(v / sd));
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(len) - 1));
  };
  return plane[cell(region.cy(), h) * w + cell(region.cx(), w)];
}

// Number of corners s whose mean corner-map confidence exceeds epsilon.
inline int reliable_corners(const Detection& d, const PredictionMaps& m, double epsilon) {
  int n = 0;
  for (std::size_t s = 0; s < 4; ++s) {
    const double tau = region_mean(m.corners.data() + s * m.plane(), m.h, m.w, m.stride, corner_region(d.box, s));
    if (tau > epsilon) ++n;
  }
  return n;
}

// Keeps a box iff at least kappa of its corners are reliable, so kappa = 0
// disables the filter.
inline std::vector<Detection> corner_vote_filter(const std::vector<Detection>& dets, const PredictionMaps& m,
                                                 double epsilon, int kappa) {
  std::vector<Detection> kept;
  for (const auto& d : dets) {
    if (kappa == 0 || reliable_corners(d, m, epsilon) >= kappa) kept.push_back(d);
  }
  return kept;
}

// Final confidence of a box: mean score over its central region, the same
// region that defines positive cells during training.
inline double box_confidence(const Box& b, const PredictionMaps& m) {
  return region_mean(m.score.data(), m.h, m.w, m.stride, shrink_box(b, kPositiveShrink));
}

struct RankedDetections {
  std::vector<Detection> detections;
  std::size_t count = 0;
};

inline RankedDetections rank_and_count(std::vector<Detection> dets, const PredictionMaps& m, std::size_t top_k,
                                       double count_threshold) {
  for (auto& d : dets) d.confidence = box_confidence(d.box, m);
  sort_by_confidence(dets);
  if (dets.size() > top_k) dets.resize(top_k);
  RankedDetections r;
  r.count = static_cast<std::size_t>(
      std::count_if(dets.begin(), dets.end(), [count_threshold](const Detection& d) { return d.confidence > count_threshold; }));
  r.detections = std::move(dets);
  return r;
}

// threshold -> NMS -> corner vote -> rank/count.
inline RankedDetections postprocess(const PredictionMaps& m, double image_w, double image_h,
                                    const PostprocessConfig& cfg) {
  auto cands = decode_candidates(m, image_w, image_h, cfg.mu);
  auto kept = nms(std::move(cands), cfg.nms_iou);
  auto voted = corner_vote_filter(kept, m, cfg.epsilon, cfg.kappa);
  return rank_and_count(std::move(voted), m, cfg.top_k, cfg.count_threshold);
}

inline std::string format_detections(const std::vector<Detection>& dets) {
  std::string out;
  char line[160];
  for (const auto& d : dets) {
    std::snprintf(line, sizeof line, "%.6f %.6f %.6f %.6f %.6f\n", d.box.x1, d.box.y1, d.box.x2, d.box.y2, d.confidence);
    out += line;
  }
  return out;
}

inline void write_detections(const std::string& path, std::vector<Detection> dets) {
  sort_by_confidence(dets);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(os), "postprocess", "cannot write detections file " + path);
  os << format_detections(dets);
}

inline std::vector<Detection> read_detections(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), "postprocess", "cannot open detections file " + path);
  std::vector<Detection> dets;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    Detection d;
    std::string extra;
    if (!(ls >> d.box.x1 >> d.box.y1 >> d.box.x2 >> d.box.y2 >> d.confidence) || (ls >> extra)) {
      fail("postprocess", path + ":" + std::to_string(lineno) + ": expected 'x1 y1 x2 y2 confidence'");
    }
    dets.push_back(d);
  }
  return dets;
}

}  // namespace ganet

#endif  // GANET_POSTPROCESS_HPP_
