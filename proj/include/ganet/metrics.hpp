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
#ifndef GANET_METRICS_HPP_
#define GANET_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ganet/box.hpp"
#include "ganet/error.hpp"

namespace ganet {

// Greedy matching in the given (confidence-descending) order: each detection
// takes the unmatched ground truth with the highest IoU if that IoU reaches
// the threshold. Returns one TP flag per detection.
inline std::vector<bool> match_detections(const std::vector<Detection>& dets, const std::vector<Box>& gts, double iou_thr) {
  std::vector<bool> taken(gts.size(), false);
  std::vector<bool> flags;
  flags.reserve(dets.size());
  for (const auto& d : dets) {
    double best = -1.0;
    std::size_t best_j = gts.size();
    for (std::size_t j = 0; j < gts.size(); ++j) {
      if (taken[j]) continue;
      const double o = iou(d.box, gts[j]);
      if (o > best) {
        best = o;
        best_j = j;
      }
    }
    const bool tp = best_j < gts.size() && best >= iou_thr;
    if (tp) taken[best_j] = true;
    flags.push_back(tp);
  }
  return flags;
}

// All-points interpolated AP: area under the precision envelope of the
// cumulative PR curve.
inline double average_precision(const std::vector<bool>& flags, std::size_t n_gt) {
  if (n_gt == 0) return flags.empty() ? 1.0 : 0.0;
  const std::size_t n = flags.size();
  std::vector<double> recall(n), precision(n);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    tp += flags[i] ? 1 : 0;
    recall[i] = static_cast<double>(tp) / static_cast<double>(n_gt);
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }
  for (std::size_t i = n; i-- > 1;) precision[i - 1] = std::max(precision[i - 1], precision[i]);
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ap += (recall[i] - prev_recall) * precision[i];
    prev_recall = recall[i];
  }
  return ap;
}

struct CountingErrors {
  double mae = 0.0;
  double rmse = 0.0;
};

inline CountingErrors counting_errors(const std::vector<std::pair<long, long>>& pairs) {
  require(!pairs.empty(), "eval-metrics", "counting_errors needs at least one image");
  double abs_sum = 0.0, sq_sum = 0.0;
  for (const auto& [gt, pred] : pairs) {
    const double d = static_cast<double>(gt - pred);
    abs_sum += std::abs(d);
    sq_sum += d * d;
  }
  const auto n = static_cast<double>(pairs.size());
  return {abs_sum / n, std::sqrt(sq_sum / n)};
}

// Per-image inputs to corpus-level evaluation.
struct ImageEval {
  std::vector<Detection> detections;  // any order
  std::vector<Box> ground_truth;
};

struct EvalResult {
  std::vector<std::pair<double, double>> ap;  // (iou threshold, AP)
  double mae = 0.0;
  double rmse = 0.0;
  std::vector<std::pair<long, long>> per_image_counts;  // (ground truth, predicted)

  double ap_at(double thr) const {
    for (const auto& [t, v] : ap) {
      if (std::abs(t - thr) < 1e-9) return v;
    }
    fail("eval-metrics", "AP at threshold " + std::to_string(thr) + " was not computed");
  }
};

// Pools detections over all images, ranks them by confidence (stable over
// image order, then in-image order), and matches per image in that order.
inline double corpus_ap(const std::vector<ImageEval>& images, double iou_thr) {
  struct Ranked {
    double conf;
    std::size_t image;
    std::size_t index;
  };
  std::vector<Ranked> order;
  std::size_t n_gt = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    n_gt += images[i].ground_truth.size();
    for (std::size_t k = 0; k < images[i].detections.size(); ++k) order.push_back({images[i].detections[k].confidence, i, k});
  }
  std::stable_sort(order.begin(), order.end(), [](const Ranked& a, const Ranked& b) { return a.conf > b.conf; });
  std::vector<std::vector<bool>> taken(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) taken[i].assign(images[i].ground_truth.size(), false);
  std::vector<bool> flags;
  flags.reserve(order.size());
  for (const auto& r : order) {
    const auto& img = images[r.image];
    const Box& box = img.detections[r.index].box;
    double best = -1.0;
    std::size_t best_j = img.ground_truth.size();
    for (std::size_t j = 0; j < img.ground_truth.size(); ++j) {
      if (taken[r.image][j]) continue;
      const double o = iou(box, img.ground_truth[j]);
      if (o > best) {
        best = o;
        best_j = j;
      }
    }
    const bool tp = best_j < img.ground_truth.size() && best >= iou_thr;
    if (tp) taken[r.image][best_j] = true;
    flags.push_back(tp);
  }
  return average_precision(flags, n_gt);
}

inline EvalResult evaluate(const std::vector<ImageEval>& images, const std::vector<double>& iou_thresholds,
                           double count_threshold) {
  EvalResult r;
  for (double t : iou_thresholds) r.ap.emplace_back(t, corpus_ap(images, t));
  for (const auto& img : images) {
    const auto pred = std::count_if(img.detections.begin(), img.detections.end(),
                                    [count_threshold](const Detection& d) { return d.confidence > count_threshold; });
    r.per_image_counts.emplace_back(static_cast<long>(img.ground_truth.size()), static_cast<long>(pred));
  }
  if (!r.per_image_counts.empty()) {
    const auto ce = counting_errors(r.per_image_counts);
    r.mae = ce.mae;
    r.rmse = ce.rmse;
  }
  return r;
}

// key=value report, 4 decimals: ap@0.50=..., ..., mae=..., rmse=...
inline std::string format_report(const EvalResult& r) {
  std::string out;
  char line[96];
  for (const auto& [t, v] : r.ap) {
    std::snprintf(line, sizeof line, "ap@%.2f=%.4f\n", t, v);
    out += line;
  }
  std::snprintf(line, sizeof line, "mae=%.4f\nrmse=%.4f\n", r.mae, r.rmse);
  out += line;
  return out;
}

inline std::map<std::string, double> parse_report(const std::string& text) {
  std::map<std::string, double> kv;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, "eval-metrics", "report line " + std::to_string(lineno) + " lacks '='");
    kv[line.substr(0, eq)] = std::stod(line.substr(eq + 1));
  }
  return kv;
}

}  // namespace ganet

#endif  // GANET_METRICS_HPP_
