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
#ifndef GANET_LOSSES_HPP_
#define GANET_LOSSES_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "ganet/autodiff.hpp"
#include "ganet/net.hpp"
#include "ganet/targets.hpp"

namespace ganet {

struct LossWeights {
  double score = 0.01;
  double foreground = 0.0025;
  double background = 0.001;
};

inline constexpr double kDiceSmoothing = 1e-6;

// -ln(IoU) of two boxes given as distances (l, t, r, b) from a shared point.
inline double iou_pixel_loss(const double g[4], const double gs[4]) {
  const double iw = std::min(g[0], gs[0]) + std::min(g[2], gs[2]);
  const double ih = std::min(g[1], gs[1]) + std::min(g[3], gs[3]);
  const double inter = iw * ih;
  const double uni = (g[0] + g[2]) * (g[1] + g[3]) + (gs[0] + gs[2]) * (gs[1] + gs[3]) - inter;
  return -std::log(inter / uni);
}

// Mean of -ln(IoU) over masked cells of each image, averaged over the batch.
// Images without positive cells contribute 0.
template <typename T>
Tensor<T>& iou_loss(Tape<T>& tape, Tensor<T>& pred, std::span<const TargetMaps> targets) {
  const Shape ps = pred.shape();
  require(ps.c == 4 && ps.n == targets.size(), "losses-targets", "iou_loss expects (n,4,h,w) predictions, got " + ps.str());
  Tensor<T>& out = tape.make(Shape{1, 1, 1, 1});
  const std::size_t plane = ps.plane();
  double total = 0.0;
  for (std::size_t n = 0; n < ps.n; ++n) {
    const TargetMaps& tm = targets[n];
    require(tm.plane() == plane, "losses-targets", "iou_loss target size mismatch");
    const std::size_t count = tm.positives();
    if (count == 0) continue;
    double acc = 0.0;
    for (std::size_t i = 0; i < plane; ++i) {
      if (!tm.valid[i]) continue;
      double g[4], gs[4];
      for (std::size_t k = 0; k < 4; ++k) {
        g[k] = pred.data()[(n * 4 + k) * plane + i];
        gs[k] = tm.location[k * plane + i];
        require(g[k] > 0.0, "losses-targets", "iou_loss requires positive predicted distances");
      }
      acc += iou_pixel_loss(g, gs);
    }
    total += acc / static_cast<double>(count);
  }
  out.data()[0] = static_cast<T>(total / static_cast<double>(ps.n));

  tape.record([&pred, &out, targets] {
    if (!out.has_grad()) return;
    pred.ensure_grad();
    const Shape ps = pred.shape();
    const std::size_t plane = ps.plane();
    for (std::size_t n = 0; n < ps.n; ++n) {
      const TargetMaps& tm = targets[n];
      const std::size_t count = tm.positives();
      if (count == 0) continue;
      const double scale = static_cast<double>(out.grad()[0]) / static_cast<double>(count * ps.n);
      for (std::size_t i = 0; i < plane; ++i) {
        if (!tm.valid[i]) continue;
        double g[4], gs[4];
        for (std::size_t k = 0; k < 4; ++k) {
          g[k] = pred.data()[(n * 4 + k) * plane + i];
          gs[k] = tm.location[k * plane + i];
        }
        const double iw = std::min(g[0], gs[0]) + std::min(g[2], gs[2]);
        const double ih = std::min(g[1], gs[1]) + std::min(g[3], gs[3]);
        const double inter = iw * ih;
        const double uni = (g[0] + g[2]) * (g[1] + g[3]) + (gs[0] + gs[2]) * (gs[1] + gs[3]) - inter;
        // d/dg of (ln U - ln I); horizontal terms (l, r) pair with ih, vertical with iw.
        for (std::size_t k = 0; k < 4; ++k) {
          const bool horizontal = (k == 0 || k == 2);
          const double active = g[k] < gs[k] ? 1.0 : 0.0;
          const double d_inter = active * (horizontal ? ih : iw);
          const double d_area = horizontal ? (g[1] + g[3]) : (g[0] + g[2]);
          const double d_uni = d_area - d_inter;
          const double d = d_uni / uni - d_inter / inter;
          pred.grad()[(n * 4 + k) * plane + i] += static_cast<T>(scale * d);
        }
      }
    }
  });
  return out;
}

// Soft Dice loss between a predicted map and a binary map.
inline double dice_value(std::span<const double> pred, std::span<const double> gt) {
  double inter = 0.0, sp = 0.0, sg = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    inter += pred[i] * gt[i];
    sp += pred[i];
    sg += gt[i];
  }
  return 1.0 - 2.0 * inter / (sp + sg + kDiceSmoothing);
}

// Dice loss per (image, channel) against `gt_of(n)`'s channel planes, averaged
// over channels and then over the batch.
template <typename T, typename GtFn>
Tensor<T>& dice_loss_impl(Tape<T>& tape, Tensor<T>& pred, GtFn gt_of) {
  const Shape ps = pred.shape();
  Tensor<T>& out = tape.make(Shape{1, 1, 1, 1});
  const std::size_t plane = ps.plane();
  // Per-plane sums kept for the backward pass.
  std::vector<double> inter(ps.n * ps.c), denom(ps.n * ps.c);
  double total = 0.0;
  for (std::size_t n = 0; n < ps.n; ++n) {
    const std::vector<double>& gt = gt_of(n);
    require(gt.size() == ps.c * plane, "losses-targets", "dice target size mismatch for " + ps.str());
    for (std::size_t c = 0; c < ps.c; ++c) {
      const T* p = pred.data() + (n * ps.c + c) * plane;
      const double* g = gt.data() + c * plane;
      double a = 0.0, sp = 0.0, sg = 0.0;
      for (std::size_t i = 0; i < plane; ++i) {
        a += static_cast<double>(p[i]) * g[i];
        sp += p[i];
        sg += g[i];
      }
      inter[n * ps.c + c] = a;
      denom[n * ps.c + c] = sp + sg + kDiceSmoothing;
      total += 1.0 - 2.0 * a / denom[n * ps.c + c];
    }
  }
  out.data()[0] = static_cast<T>(total / static_cast<double>(ps.n * ps.c));
  tape.record([&pred, &out, gt_of, inter = std::move(inter), denom = std::move(denom)] {
    if (!out.has_grad()) return;
    pred.ensure_grad();
    const Shape ps = pred.shape();
    const std::size_t plane = ps.plane();
    const double scale = static_cast<double>(out.grad()[0]) / static_cast<double>(ps.n * ps.c);
    for (std::size_t n = 0; n < ps.n; ++n) {
      const std::vector<double>& gt = gt_of(n);
      for (std::size_t c = 0; c < ps.c; ++c) {
        const double a = inter[n * ps.c + c];
        const double b = denom[n * ps.c + c];
        const double* g = gt.data() + c * plane;
        T* dp = pred.grad_data() + (n * ps.c + c) * plane;
        for (std::size_t i = 0; i < plane; ++i) dp[i] += static_cast<T>(scale * -2.0 * (g[i] * b - a) / (b * b));
      }
    }
  });
  return out;
}

template <typename T>
Tensor<T>& score_dice_loss(Tape<T>& tape, Tensor<T>& score, std::span<const TargetMaps> targets) {
  require(score.shape().c == 1 && score.shape().n == targets.size(), "losses-targets",
          "score loss expects (n,1,h,w), got " + score.shape().str());
  return dice_loss_impl(tape, score, [targets](std::size_t n) -> const std::vector<double>& { return targets[n].score; });
}

template <typename T>
Tensor<T>& corner_dice_loss(Tape<T>& tape, Tensor<T>& corners, std::span<const TargetMaps> targets) {
  require(corners.shape().c == 4 && corners.shape().n == targets.size(), "losses-targets",
          "corner loss expects (n,4,h,w), got " + corners.shape().str());
  return dice_loss_impl(tape, corners,
                        [targets](std::size_t n) -> const std::vector<double>& { return targets[n].corners; });
}

inline double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

// Binary cross-entropy on logits, -log p for y = +1 and -log(1 - p) otherwise.
inline double ba_loss_value(double logit, int y) { return y == 1 ? softplus(-logit) : softplus(logit); }

// Mean over levels and batch of the crop-classification loss; every level is
// supervised with the crop's label.
template <typename T>
Tensor<T>& ba_loss(Tape<T>& tape, const std::vector<Tensor<T>*>& logits, std::span<const int> labels) {
  Tensor<T>& out = tape.make(Shape{1, 1, 1, 1});
  if (logits.empty()) return out;
  const std::size_t n = labels.size();
  double total = 0.0;
  for (Tensor<T>* lg : logits) {
    require(lg->numel() == n, "losses-targets", "ba_loss expects one logit per image per level");
    for (std::size_t i = 0; i < n; ++i) total += ba_loss_value(lg->data()[i], labels[i]);
  }
  const double denom = static_cast<double>(logits.size() * n);
  out.data()[0] = static_cast<T>(total / denom);
  tape.record([logits, labels, &out, denom] {
    if (!out.has_grad()) return;
    const double g = static_cast<double>(out.grad()[0]) / denom;
    for (Tensor<T>* lg : logits) {
      lg->ensure_grad();
      for (std::size_t i = 0; i < labels.size(); ++i) {
        const double p = ops::sigmoid_scalar(static_cast<double>(lg->data()[i]));
        lg->grad()[i] += static_cast<T>(g * (labels[i] == 1 ? p - 1.0 : p));
      }
    }
  });
  return out;
}

template <typename T>
struct LossTerms {
  Tensor<T>* total = nullptr;
  Tensor<T>* loc = nullptr;
  Tensor<T>* score = nullptr;
  Tensor<T>* foreground = nullptr;
  Tensor<T>* background = nullptr;
};

// L = L_loc + λ_sco·L_sco + λ_FA·L_FA + λ_BA·L_BA.
inline double combine_losses(double loc, double score, double fa, double ba, const LossWeights& w) {
  return loc + w.score * score + w.foreground * fa + w.background * ba;
}

template <typename T>
LossTerms<T> total_loss(Tape<T>& tape, const NetOutputs<T>& out, std::span<const TargetMaps> targets,
                        std::span<const int> labels, const LossWeights& w) {
  LossTerms<T> terms;
  terms.loc = &iou_loss(tape, *out.location, targets);
  terms.score = &score_dice_loss(tape, *out.score, targets);
  terms.foreground = &corner_dice_loss(tape, *out.corners, targets);
  terms.background = &ba_loss(tape, out.ba_logits, labels);
  terms.total = &ops::weighted_sum<T>(tape, {{terms.loc, T(1)},
                                             {terms.score, static_cast<T>(w.score)},
                                             {terms.foreground, static_cast<T>(w.foreground)},
                                             {terms.background, static_cast<T>(w.background)}});
  return terms;
}

}  // namespace ganet

#endif  // GANET_LOSSES_HPP_
